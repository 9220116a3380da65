#include "hkq/hyperpolygon.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <future>
#include <numeric>
#include <sstream>

#include "hkq/linalg.hpp"

namespace hkq {

int subset_size(Subset s) { return std::popcount(s); }

std::vector<int> elements(Subset s) {
  std::vector<int> out;
  for (int i = 1; s; ++i, s >>= 1) {
    if (s & 1U) out.push_back(i);
  }
  return out;
}

std::string subset_to_string(Subset s) {
  std::string out = "{";
  for (int e : elements(s)) out += (out.size() > 1 ? "," : "") + std::to_string(e);
  return out + "}";
}

Subset parse_subset(std::string_view text) {
  std::string t(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == ' ' || c == '{' || c == '}'; }), t.end());
  Subset s = 0;
  std::size_t start = 0;
  while (start < t.size()) {
    auto end = t.find(',', start);
    if (end == std::string::npos) end = t.size();
    const std::string item = t.substr(start, end - start);
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad subset element '" + item + "'");
    }
    if (v < 1 || v > 32) throw ParseError("subset element out of range: " + item);
    s = with(s, v);
    start = end + 1;
  }
  return s;
}

EdgeLengths::EdgeLengths(std::vector<Rational> values) : xi(std::move(values)) {
  if (xi.size() < 3) throw ParseError("need at least 3 edge lengths");
  if (xi.size() > 20) throw ParseError("at most 20 edge lengths are supported");
  for (const auto& v : xi) {
    if (sgn(v) <= 0) throw ParseError("edge lengths must be positive (got " + hkq::to_string(v) + ")");
  }
}

EdgeLengths EdgeLengths::parse(std::string_view text) {
  std::vector<Rational> v;
  std::string item;
  std::istringstream is{std::string(text)};
  while (std::getline(is, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    v.push_back(parse_rational(item));
  }
  return EdgeLengths(std::move(v));
}

EdgeLengths EdgeLengths::powers_of_two(int n) {
  std::vector<Rational> v;
  for (int i = 0; i < n; ++i) v.emplace_back(1 << i);
  return EdgeLengths(std::move(v));
}

std::string EdgeLengths::to_string() const {
  std::string s;
  for (const auto& v : xi) s += (s.empty() ? "" : ",") + hkq::to_string(v);
  return s;
}

NonGenericError::NonGenericError(Subset witness)
    : Error("edge lengths are not generic: " + subset_to_string(witness) + " and its complement have equal length"),
      witness_(witness) {}

bool ShortSubsetTable::is_short(Subset s) const { return s < short_.size() && short_[s]; }

int ShortSubsetTable::m(Subset s) {
  if (s == 0) throw Error("m_S of the empty set");
  return std::countr_zero(s) + 1;
}

int ShortSubsetTable::n_of(Subset s) const {
  const Subset c = full() & ~s;
  if (c == 0) throw Error("n_S of the full set");
  return std::countr_zero(c) + 1;
}

std::vector<Subset> ShortSubsetTable::nonempty_shorts() const {
  std::vector<Subset> out;
  for (auto s : shorts) {
    if (s) out.push_back(s);
  }
  return out;
}

namespace {

bool subset_less(Subset a, Subset b) {
  if (subset_size(a) != subset_size(b)) return subset_size(a) < subset_size(b);
  return elements(a) < elements(b);
}

std::vector<Subset> all_subsets_ordered(int n) {
  std::vector<Subset> all(std::size_t{1} << n);
  std::iota(all.begin(), all.end(), Subset{0});
  std::sort(all.begin(), all.end(), subset_less);
  return all;
}

}  // namespace

ShortSubsetTable shorts(const EdgeLengths& xi) {
  const int n = xi.n();
  Rational total = 0;
  for (const auto& v : xi.xi) total += v;
  ShortSubsetTable t;
  t.n = n;
  t.short_.assign(std::size_t{1} << n, false);
  for (Subset s : all_subsets_ordered(n)) {
    Rational in = 0;
    for (int e : elements(s)) in += xi.xi[static_cast<std::size_t>(e - 1)];
    const Rational out = total - in;
    if (in == out) throw NonGenericError(s);
    if (in < out) {
      t.short_[s] = true;
      t.shorts.push_back(s);
    }
  }
  return t;
}

namespace {

Ring make_ring_P(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("c" + std::to_string(i));
  names.push_back("alpha");
  names.push_back("x");
  return Ring(make_table(std::move(names)));
}

Ring make_ring_Q(int n) {
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (int i = 1; i <= n; ++i) {
    names.push_back("c" + std::to_string(i));
    degrees.push_back(2);
  }
  names.push_back("alpha2");
  degrees.push_back(4);
  names.push_back("x");
  degrees.push_back(2);
  return Ring(make_table(std::move(names), std::move(degrees)));
}

// A_T and B_T over the first k edges, in ring_P.
std::pair<Polynomial, Polynomial> ab_over(const Ring& rp, int k, Subset t) {
  const Polynomial x = Polynomial::variable(rp, "x");
  const Polynomial alpha = Polynomial::variable(rp, "alpha");
  const Rational half(1, 2);
  Polynomial a = Polynomial::constant(rp, Rational(1));
  Polynomial b = a;
  for (int i = 1; i <= k; ++i) {
    const Polynomial c = Polynomial::variable(rp, static_cast<std::size_t>(i - 1));
    const Polynomial ai = half * (c + alpha);
    const Polynomial bi = half * (c - alpha);
    if (has(t, i)) {
      a *= x - ai;
      b *= x - bi;
    } else {
      a *= bi;
      b *= ai;
    }
  }
  return {a, b};
}

Polynomial c_over(const Ring& rp, const Ring& rq, int k, Subset t) {
  auto [a, b] = ab_over(rp, k, t);
  return even_part_to_Q(a + b, rq);
}

// ∏_{i∈S, i≠m}(c_i − x) · ∏_{j∈{1..k}∖S, j≠nn}(c_nn + c_j) in ring_Q.
Polynomial d_over(const Ring& rq, int k, Subset s, int m, int nn) {
  const Polynomial x = Polynomial::variable(rq, "x");
  auto c = [&](int i) { return Polynomial::variable(rq, static_cast<std::size_t>(i - 1)); };
  Polynomial d = Polynomial::constant(rq, Rational(1));
  for (int i = 1; i <= k; ++i) {
    if (has(s, i)) {
      if (i != m) d *= c(i) - x;
    } else if (i != nn) {
      d *= c(nn) + c(i);
    }
  }
  return d;
}

}  // namespace

Polynomial even_part_to_Q(const Polynomial& p, const Ring& ring_q) {
  const auto& tp = p.ring().table();
  const auto alpha = tp.index_of("alpha");
  if (!alpha) throw Error("even_part_to_Q: no alpha in the source ring");
  std::vector<std::size_t> target(tp.size());
  for (std::size_t i = 0; i < tp.size(); ++i) {
    const auto idx = ring_q.table().index_of(i == *alpha ? "alpha2" : tp.name(i));
    if (!idx) throw RingMismatch("even_part_to_Q: target lacks " + tp.name(i));
    target[i] = *idx;
  }
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    std::vector<int> e(ring_q.size(), 0);
    for (std::size_t i = 0; i < tp.size(); ++i) {
      const int k = static_cast<int>(t.mono.exponent(i));
      if (i == *alpha) {
        if (k % 2) throw InternalCheckFailed("odd power of alpha in " + p.to_string());
        e[target[i]] = k / 2;
      } else {
        e[target[i]] = k;
      }
    }
    terms.push_back({ring_q.monomial(e), t.coef});
  }
  return Polynomial::from_terms(ring_q, std::move(terms));
}

HyperpolygonInstance::HyperpolygonInstance(EdgeLengths lengths, Budget budget)
    : lengths_(std::move(lengths)), table_(shorts(lengths_)), budget_(budget) {
  const int n = table_.n;
  ring_p_ = make_ring_P(n);
  ring_q_ = make_ring_Q(n);
  const Polynomial alpha = Polynomial::variable(ring_p_, "alpha");
  std::vector<Polynomial> rp, rq;
  for (int i = 1; i <= n; ++i) {
    rp.push_back(Polynomial::variable(ring_p_, static_cast<std::size_t>(i - 1)).pow(2) - alpha.pow(2));
    rq.push_back(c(i).pow(2) - alpha2());
  }
  rel_p_ = Ideal(ring_p_, rp);
  rel_q_ = Ideal(ring_q_, rq);
  std::vector<Polynomial> gi = rp, gj = rq, gd = rq;
  for (Subset s : table_.shorts) {
    auto [a, b] = gens_AB(s);
    gi.push_back(a);
    gi.push_back(b);
    gj.push_back(gens_C(s));
    if (s) gd.push_back(gens_D(s));
  }
  ideal_i_ = Ideal(ring_p_, gi);
  ideal_j_ = Ideal(ring_q_, gj);
  ideal_d_ = Ideal(ring_q_, gd);
}

Polynomial HyperpolygonInstance::euler_e() const {
  return alpha2() * (x().pow(2) - alpha2());
}

Polynomial HyperpolygonInstance::euler_eprime() const {
  const Polynomial a = Polynomial::variable(ring_p_, "alpha");
  const Polynomial xp = Polynomial::variable(ring_p_, "x");
  return a * (xp.pow(2) - a.pow(2));
}

Substitution HyperpolygonInstance::weyl_involution() const {
  return {{"alpha", -Polynomial::variable(ring_p_, "alpha")}};
}

Polynomial HyperpolygonInstance::to_P(const Polynomial& q) const {
  return substitute(q, {{"alpha2", Polynomial::variable(ring_p_, "alpha").pow(2)}}, ring_p_);
}

std::pair<Polynomial, Polynomial> HyperpolygonInstance::gens_AB(Subset s) const {
  if (!table_.is_short(s)) throw Error("gens_AB: " + subset_to_string(s) + " is not short");
  return ab_over(ring_p_, n(), s);
}

Polynomial HyperpolygonInstance::gens_C(Subset s) const {
  if (!table_.is_short(s)) throw Error("gens_C: " + subset_to_string(s) + " is not short");
  return c_over(ring_p_, ring_q_, n(), s);
}

Polynomial HyperpolygonInstance::gens_D(Subset s) const {
  if (s == 0) throw Error("gens_D: S must be nonempty");
  if (!table_.is_short(s)) throw Error("gens_D: " + subset_to_string(s) + " is not short");
  return d_over(ring_q_, n(), s, ShortSubsetTable::m(s), table_.n_of(s));
}

KirwanPresentation HyperpolygonInstance::kirwan_presentation() const {
  KirwanPresentation k;
  k.invariant_ring = QuotientRing(ideal_j_, budget_);
  k.euler = euler_e();
  k.full_ring = QuotientRing(ideal_i_, budget_);
  k.involution = weyl_involution();
  k.euler_prime = euler_eprime();
  k.surjectivity_assumed = true;
  return k;
}

PropHpResult prop_hp(const HyperpolygonInstance& inst) {
  const Budget& budget = inst.budget();
  const Ideal k1 = colon(inst.ideal_J(), inst.euler_e(), budget);
  const Ideal& k2 = inst.ideal_D();
  PropHpResult r{QuotientRing(k1, budget)};
  r.colon_contains_d = contains(k1, Ideal(inst.ring_Q(), k2.basis(budget)), budget);
  r.d_contains_colon = contains(k2, Ideal(inst.ring_Q(), k1.basis(budget)), budget);
  r.bases_equal = k1.basis(budget) == k2.basis(budget);
  return r;
}

std::string to_string(CertificatePath p) { return p == CertificatePath::Recursion ? "recursion" : "groebner-lift"; }

std::string MembershipCertificate::serialize() const {
  std::ostringstream os;
  os << "subject " << subset_to_string(subject) << "\n";
  for (const auto& [t, q] : combination) os << subset_to_string(t) << ": " << q.to_string() << "\n";
  return os.str();
}

MembershipCertificate MembershipCertificate::deserialize(const Ring& ring_q, std::string_view text) {
  MembershipCertificate cert;
  std::istringstream is{std::string(text)};
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (!header) {
      if (!line.starts_with("subject ")) throw ParseError("certificate must start with 'subject {..}'");
      cert.subject = parse_subset(line.substr(8));
      header = true;
      continue;
    }
    const auto colon_pos = line.find(':');
    if (colon_pos == std::string::npos) throw ParseError("certificate line without ':'");
    cert.combination.emplace_back(parse_subset(line.substr(0, colon_pos)),
                                  parse_polynomial(ring_q, std::string_view(line).substr(colon_pos + 1)));
  }
  if (!header) throw ParseError("empty certificate");
  return cert;
}

bool verify_certificate(const HyperpolygonInstance& inst, const MembershipCertificate& cert) {
  const Subset s = cert.subject;
  if (s == 0 || !inst.table().is_short(s)) return false;
  Polynomial sum(inst.ring_Q());
  for (const auto& [t, q] : cert.combination) {
    if ((t & ~s) != 0 || !inst.table().is_short(t)) return false;
    sum += q * inst.gens_C(t);
  }
  sum -= inst.euler_e() * inst.gens_D(s);
  return normal_form(sum, inst.relations_Q(), inst.budget()).is_zero();
}

namespace {

class BookkeepingError : public Error {
 public:
  using Error::Error;
};

using Combination = std::map<Subset, Polynomial>;

Subset swap_in_subset(Subset s, int p, int k) {
  const bool hp = has(s, p), hk = has(s, k);
  s = without(without(s, p), k);
  if (hp) s = with(s, k);
  if (hk) s = with(s, p);
  return s;
}

int swap_index(int i, int p, int k) { return i == p ? k : (i == k ? p : i); }

class Certifier {
 public:
  explicit Certifier(const HyperpolygonInstance& inst) : inst_(inst) {}

  Combination run(int k, Subset s, int m, int nn) {
    if (s == 0 || !has(s, m) || has(s, nn) || nn < 1 || nn > k || (s >> k) != 0) {
      throw BookkeepingError("inconsistent data at k=" + std::to_string(k) + ", S=" + subset_to_string(s));
    }
    if (subset_size(s) == 1) {
      const int p = m;
      if (p == k) return base(k);
      return conjugate(base(k), p, k);
    }
    // peel an element of S other than m, moved to position k first
    int p = 0;
    for (int e : elements(s)) {
      if (e != m) p = e;
    }
    if (p == k) return peel(k, s, m, nn);
    const Combination inner =
        peel(k, swap_in_subset(s, p, k), swap_index(m, p, k), swap_index(nn, p, k));
    return conjugate(inner, p, k);
  }

  int relabelings = 0;

 private:
  // k ∈ S, k ≠ m: D_S = (c_k − x)·D'_{S∖k} and C_T − C_{T∪k} = (c_k − x)·C'_T.
  Combination peel(int k, Subset s, int m, int nn) {
    if (k - 1 < 2) throw BookkeepingError("recursion reached fewer than two edges");
    const Combination sub = run(k - 1, without(s, k), m, nn);
    Combination out;
    for (const auto& [t, q] : sub) {
      add(out, t, q);
      add(out, with(t, k), -q);
    }
    return out;
  }

  // e·D_{k} = 2^{k−2}·(x + c_k)·((2x − c_k)·C_∅ − c_k·C_{k}) modulo relations.
  Combination base(int k) {
    const Polynomial x = inst_.x();
    const Polynomial ck = inst_.c(k);
    const Rational scale(Integer(1) << static_cast<unsigned>(k - 2));
    Combination out;
    add(out, 0, scale * (x + ck) * (Rational(2) * x - ck));
    add(out, with(0, k), -scale * (x + ck) * ck);
    return out;
  }

  Combination conjugate(const Combination& in, int p, int k) {
    ++relabelings;
    const Substitution sigma{{"c" + std::to_string(p), inst_.c(k)}, {"c" + std::to_string(k), inst_.c(p)}};
    Combination out;
    for (const auto& [t, q] : in) add(out, swap_in_subset(t, p, k), substitute(q, sigma, inst_.ring_Q()));
    return out;
  }

  static void add(Combination& c, Subset t, const Polynomial& q) {
    auto it = c.find(t);
    if (it == c.end()) {
      c.emplace(t, q);
    } else {
      it->second += q;
    }
  }

  const HyperpolygonInstance& inst_;
};

MembershipCertificate groebner_certificate(const HyperpolygonInstance& inst, Subset s) {
  std::vector<Subset> ts;
  std::vector<Polynomial> gens;
  for (Subset t : inst.table().shorts) {
    if ((t & ~s) == 0) {
      ts.push_back(t);
      gens.push_back(inst.gens_C(t));
    }
  }
  for (const auto& r : inst.relations_Q().generators()) gens.push_back(r);
  const Ideal sub(inst.ring_Q(), gens);
  const auto q = lift(sub, inst.euler_e() * inst.gens_D(s), inst.budget());
  if (!q) throw InternalCheckFailed("e·D_S is not in ⟨C_T | T ⊆ S⟩ for S = " + subset_to_string(s));
  MembershipCertificate cert;
  cert.subject = s;
  cert.path = CertificatePath::GroebnerLift;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(*q)[i].is_zero()) cert.combination.emplace_back(ts[i], (*q)[i]);
  }
  return cert;
}

}  // namespace

MembershipCertificate certify_membership(const HyperpolygonInstance& inst, Subset s, const CertifyOptions& opts) {
  if (s == 0 || !inst.table().is_short(s)) throw Error("certify_membership: S must be a nonempty short subset");
  std::string reason = "forced";
  if (!opts.force_fallback) {
    try {
      Certifier c(inst);
      const Combination comb = c.run(inst.n(), s, ShortSubsetTable::m(s), inst.table().n_of(s));
      MembershipCertificate cert;
      cert.subject = s;
      cert.path = CertificatePath::Recursion;
      cert.relabelings = c.relabelings;
      for (const auto& [t, q] : comb) {
        if (!q.is_zero()) cert.combination.emplace_back(t, q);
      }
      if (verify_certificate(inst, cert)) return cert;
      reason = "recursion output failed the expansion check";
    } catch (const BookkeepingError& e) {
      reason = e.what();
    }
  }
  MembershipCertificate cert = groebner_certificate(inst, s);
  cert.fallback_reason = reason;
  if (!verify_certificate(inst, cert)) {
    throw InternalCheckFailed("no verified certificate for S = " + subset_to_string(s));
  }
  return cert;
}

QuotientRing konno_ring(int n, Budget budget) {
  if (n < 3) throw Error("konno_ring needs n ≥ 3");
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("c" + std::to_string(i));
  const Ring r(make_table(names));
  std::vector<Polynomial> gens;
  const Polynomial c1sq = Polynomial::variable(r, std::size_t{0}).pow(2);
  for (int i = 2; i <= n; ++i) gens.push_back(Polynomial::variable(r, static_cast<std::size_t>(i - 1)).pow(2) - c1sq);
  std::vector<std::size_t> vars(static_cast<std::size_t>(n));
  std::iota(vars.begin(), vars.end(), 0);
  const auto levels = standard_monomials(r, {}, vars, n - 2);
  for (const auto& m : levels.back()) gens.push_back(Polynomial::monomial(r, m));
  return QuotientRing(Ideal(r, gens), budget);
}

Polynomial base_case_rhs(const HyperpolygonInstance& inst, int s, const Rational& scale) {
  const Polynomial x = inst.x();
  const Polynomial cs = inst.c(s);
  const Polynomial rhs = scale * (x + cs) * ((Rational(2) * x - cs) * inst.gens_C(0) - cs * inst.gens_C(with(0, s)));
  return normal_form(rhs, inst.relations_Q(), inst.budget());
}

bool formality_identity(const HilbertSeries& series, const HilbertSeries& reduced, int max_degree) {
  for (int d = 0; d <= max_degree; d += 2) {
    std::uint64_t sum = 0;
    for (int k = d; k >= 0; k -= 2) sum += reduced.coefficient(k);
    if (series.coefficient(d) != sum) return false;
  }
  return true;
}

bool HyperpolygonReport::all_passed() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.passed; });
}

namespace {

int top_degree(const HilbertSeries& hs) {
  int top = 0;
  for (std::size_t d = 0; d < hs.coefficients.size(); ++d) {
    if (hs.coefficients[d]) top = static_cast<int>(d);
  }
  return top;
}

template <class F>
void run_stage(HyperpolygonReport& rep, const std::string& name, F&& body) {
  StageResult st;
  st.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    st.passed = body();
    if (!st.passed) st.error = "check failed";
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(name + ": " + e.what());
  } catch (const NonGenericError&) {
    throw;
  } catch (const std::exception& e) {
    st.passed = false;
    st.error = e.what();
  }
  st.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rep.stages.push_back(std::move(st));
}

}  // namespace

HyperpolygonReport full_report(const EdgeLengths& xi, const Budget& budget, const ReportOptions& opts) {
  HyperpolygonReport rep;
  for (const auto& v : xi.xi) rep.xi.push_back(hkq::to_string(v));
  rep.n = xi.n();
  std::optional<HyperpolygonInstance> inst;

  run_stage(rep, "shorts", [&] {
    inst.emplace(xi, budget);
    rep.shorts = inst->table().shorts;
    bool ok = rep.shorts.size() == (std::size_t{1} << (rep.n - 1)) && rep.shorts.front() == 0;
    for (Subset s = 0; s <= inst->table().full(); ++s) {
      ok = ok && (inst->table().is_short(s) != inst->table().is_short(inst->table().full() & ~s));
    }
    return ok;
  });
  if (!inst) return rep;
  const HyperpolygonInstance& in = *inst;

  run_stage(rep, "presentation", [&] {
    rep.generators_I = in.ideal_I().generators().size();
    rep.generators_J = in.ideal_J().generators().size();
    bool ok = true;
    const auto sigma = in.weyl_involution();
    for (Subset s : in.table().shorts) {
      auto [a, b] = in.gens_AB(s);
      ok = ok && substitute(a, sigma) == b && substitute(b, sigma) == a;
      ok = ok && in.to_P(in.gens_C(s)) == a + b;
    }
    rep.basis_size_J = in.ideal_J().basis(budget).size();
    (void)in.relations_Q().basis(budget);
    return ok;
  });

  std::optional<PropHpResult> hp;
  run_stage(rep, "prop_hp", [&] {
    hp.emplace(prop_hp(in));
    rep.basis_size_colon = hp->ring.ideal().basis(budget).size();
    return hp->holds();
  });

  run_stage(rep, "certificates", [&] {
    const auto subjects = in.table().nonempty_shorts();
    std::vector<std::future<CertificateSummary>> jobs;
    for (Subset s : subjects) {
      jobs.push_back(std::async(opts.parallel ? std::launch::async : std::launch::deferred, [&in, s] {
        const MembershipCertificate cert = certify_membership(in, s);
        CertificateSummary sum;
        sum.subject = s;
        sum.path = cert.path;
        sum.relabelings = cert.relabelings;
        sum.terms = cert.combination.size();
        sum.verified = verify_certificate(in, cert);
        sum.groebner_membership = contains(in.ideal_J(), in.euler_e() * in.gens_D(s), in.budget());
        return sum;
      }));
    }
    bool ok = true;
    for (auto& j : jobs) {
      rep.certificates.push_back(j.get());
      ok = ok && rep.certificates.back().verified && rep.certificates.back().groebner_membership;
    }
    return ok;
  });

  const int top = 2 * (rep.n - 2);
  run_stage(rep, "basis_count", [&] {
    const QuotientRing mod_x(sum(in.relations_Q(), {in.x()}), budget);
    const auto basis = mod_x.graded_basis(top);
    rep.top_degree_dim = basis.size();
    const auto ds = in.table().nonempty_shorts();
    Matrix<Rational> m(ds.size(), basis.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto coords = mod_x.coordinates(in.gens_D(ds[i]), basis);
      for (std::size_t j = 0; j < basis.size(); ++j) m(i, j) = coords[j];
    }
    rep.d_rank = rank(m);
    return rep.top_degree_dim == ds.size() && rep.d_rank == ds.size();
  });

  if (!hp) return rep;
  const QuotientRing& colon_ring = hp->ring;
  const QuotientRing j_ring(in.ideal_J(), budget);

  run_stage(rep, "rigidity", [&] {
    for (int d = 0; d < top; d += 2) {
      if (colon_ring.graded_basis(d).size() != j_ring.graded_basis(d).size()) return false;
    }
    return true;
  });

  std::optional<HilbertSeries> colon_mod_x;
  run_stage(rep, "konno", [&] {
    colon_mod_x = QuotientRing(sum(colon_ring.ideal(), {in.x()}), budget).hilbert_series(0);
    rep.betti = colon_mod_x->even_coefficients();
    const HilbertSeries k = konno_ring(rep.n, budget).hilbert_series(0);
    rep.konno_betti = k.even_coefficients();
    return colon_mod_x->exact && k.exact && rep.betti == rep.konno_betti;
  });

  run_stage(rep, "formality", [&] {
    const HilbertSeries j_mod_x = QuotientRing(sum(in.ideal_J(), {in.x()}), budget).hilbert_series(0);
    if (!j_mod_x.exact || !colon_mod_x) return false;
    rep.formality_bound = std::max(top_degree(j_mod_x), top_degree(*colon_mod_x)) + 6;
    return formality_identity(j_ring.hilbert_series(rep.formality_bound), j_mod_x, rep.formality_bound) &&
           formality_identity(colon_ring.hilbert_series(rep.formality_bound), *colon_mod_x, rep.formality_bound);
  });

  run_stage(rep, "localized_rank", [&] {
    const auto x_index = in.ring_Q().table().index_of("x");
    rep.localized_rank = colon_ring.localized_rank(*x_index);
    const auto konno_total =
        std::accumulate(rep.konno_betti.begin(), rep.konno_betti.end(), std::uint64_t{0});
    const auto direct = colon_mod_x ? colon_mod_x->total() : 0;
    return rep.localized_rank == konno_total && rep.localized_rank == direct;
  });

  if (opts.second_iso) {
    run_stage(rep, "kirwan_bridge", [&] {
      rep.surjectivity_assumed = in.kirwan_presentation().surjectivity_assumed;
      const Ideal& i = in.ideal_I();
      const Polynomial ep = in.euler_eprime();
      for (const auto& f : colon_ring.ideal().basis(budget)) {
        if (!contains(i, ep * in.to_P(f), budget)) return false;
      }
      return true;
    });
    run_stage(rep, "second_iso", [&] {
      const KirwanPresentation k = in.kirwan_presentation();
      rep.second_iso = verify_second_iso(k, top + 4);
      return rep.second_iso->equal;
    });
  }
  return rep;
}

}  // namespace hkq
