#include "hkq/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "hkq/error.hpp"

namespace hkq {

Polynomial Polynomial::constant(const Ring& ring, const Rational& c) {
  Polynomial p(ring);
  if (!hkq::is_zero(c)) p.terms_.push_back({ring.one(), c});
  return p;
}

Polynomial Polynomial::variable(const Ring& ring, std::size_t index) {
  if (index >= ring.size()) throw Error("variable index out of range");
  Polynomial p(ring);
  p.terms_.push_back({ring.variable(index), Rational(1)});
  return p;
}

Polynomial Polynomial::variable(const Ring& ring, std::string_view name) {
  const auto idx = ring.table().index_of(name);
  if (!idx) throw Error("unknown variable '" + std::string(name) + "'");
  return variable(ring, *idx);
}

Polynomial Polynomial::monomial(const Ring& ring, const Monomial& m, Rational c) {
  Polynomial p(ring);
  if (!hkq::is_zero(c)) p.terms_.push_back({m, std::move(c)});
  return p;
}

Polynomial Polynomial::from_terms(const Ring& ring, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [&](const Term& a, const Term& b) { return ring.compare(a.mono, b.mono) > 0; });
  Polynomial p(ring);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
      if (hkq::is_zero(p.terms_.back().coef)) p.terms_.pop_back();
    } else if (!hkq::is_zero(t.coef)) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Polynomial Polynomial::from_sorted_terms(const Ring& ring, std::vector<Term> terms) {
  Polynomial p(ring);
  p.terms_ = std::move(terms);
  return p;
}

int Polynomial::weight() const {
  int w = 0;
  for (const auto& t : terms_) w = std::max(w, t.mono.weight());
  return w;
}

bool Polynomial::is_homogeneous() const {
  for (const auto& t : terms_) {
    if (t.mono.weight() != terms_.front().mono.weight()) return false;
  }
  return true;
}

Polynomial Polynomial::homogeneous_part(int w) const {
  Polynomial p(ring_);
  for (const auto& t : terms_) {
    if (t.mono.weight() == w) p.terms_.push_back(t);
  }
  return p;
}

bool Polynomial::involves(std::size_t var) const {
  for (const auto& t : terms_) {
    if (t.mono.exponent(var)) return true;
  }
  return false;
}

void Polynomial::check_ring(const Polynomial& other) const {
  if (!(ring_ == other.ring_)) throw RingMismatch("polynomials live in different rings");
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

Polynomial Polynomial::add_scaled(const Rational& c, const Monomial& m, const Polynomial& g) const {
  check_ring(g);
  Polynomial out(ring_);
  if (hkq::is_zero(c)) {
    out.terms_ = terms_;
    return out;
  }
  out.terms_.reserve(terms_.size() + g.terms_.size());
  auto a = terms_.begin();
  auto b = g.terms_.begin();
  const bool unit_mono = m.is_one();
  while (a != terms_.end() || b != g.terms_.end()) {
    if (b == g.terms_.end()) {
      out.terms_.push_back(*a++);
      continue;
    }
    const Monomial bm = unit_mono ? b->mono : b->mono * m;
    if (a == terms_.end()) {
      out.terms_.push_back({bm, c * b->coef});
      ++b;
      continue;
    }
    const int cmp = ring_.compare(a->mono, bm);
    if (cmp > 0) {
      out.terms_.push_back(*a++);
    } else if (cmp < 0) {
      out.terms_.push_back({bm, c * b->coef});
      ++b;
    } else {
      Rational s = a->coef + c * b->coef;
      if (!hkq::is_zero(s)) out.terms_.push_back({a->mono, std::move(s)});
      ++a;
      ++b;
    }
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (ring_.table_ptr() == nullptr && terms_.empty()) ring_ = other.ring_;
  *this = add_scaled(Rational(1), Monomial{}, other);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (ring_.table_ptr() == nullptr && terms_.empty()) ring_ = other.ring_;
  *this = add_scaled(Rational(-1), Monomial{}, other);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_ring(b);
  if (a.is_zero() || b.is_zero()) return Polynomial(a.ring_);
  if (a.terms_.size() == 1) return b.times_monomial(a.terms_[0].mono, a.terms_[0].coef);
  if (b.terms_.size() == 1) return a.times_monomial(b.terms_[0].mono, b.terms_[0].coef);
  std::vector<Term> prods;
  prods.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) prods.push_back({s.mono * t.mono, s.coef * t.coef});
  }
  return Polynomial::from_terms(a.ring_, std::move(prods));
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (hkq::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(ring_, Rational(1));
  Polynomial base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const Rational& c) const {
  Polynomial out(ring_);
  if (hkq::is_zero(c)) return out;
  out.terms_.reserve(terms_.size());
  // multiplication by a monomial preserves the order of the terms
  for (const auto& t : terms_) out.terms_.push_back({t.mono * m, t.coef * c});
  return out;
}

Polynomial Polynomial::monic() const {
  if (is_zero() || is_one(leading_coef())) return *this;
  Rational inv = 1 / leading_coef();
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coef *= inv;
  return p;
}

Polynomial Polynomial::with_ring(const Ring& ring) const {
  if (!ring.same_table(ring_)) throw RingMismatch("with_ring requires the same variable table");
  return from_terms(ring, terms_);
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  if (terms_.empty()) return true;
  if (!ring_.same_table(other.ring_)) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].mono == other.terms_[i].mono) || terms_[i].coef != other.terms_[i].coef) {
      // different orders may list equal polynomials differently
      if (ring_.order() == other.ring_.order()) return false;
      return with_ring(other.ring_).terms_.size() == other.terms_.size() &&
             (with_ring(other.ring_) - other).is_zero();
    }
  }
  return true;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  const auto& tab = ring_.table();
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    if (first) {
      if (sgn(c) < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
      if (sgn(c) < 0) c = -c;
    }
    first = false;
    bool need_star = false;
    if (!is_one(c) || t.mono.is_one()) {
      os << hkq::to_string(c);
      need_star = true;
    }
    for (std::size_t i = 0; i < tab.size(); ++i) {
      const auto e = t.mono.exponent(i);
      if (!e) continue;
      if (need_star) os << "*";
      os << tab.name(i);
      if (e > 1) os << "^" << e;
      need_star = true;
    }
  }
  return os.str();
}

namespace {

class Parser {
 public:
  Parser(const Ring& ring, std::string_view text) : ring_(ring), s_(text) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + " in '" + std::string(s_) +
                     "': " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    skip();
    Polynomial acc(ring_);
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    Polynomial t = term();
    acc = negate ? -t : t;
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = power();
    while (accept('*')) acc *= power();
    return acc;
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string lit(s_.substr(start, pos_ - start));
      skip();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip();
        const std::size_t dstart = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (dstart == pos_) fail("expected denominator");
        lit += "/" + std::string(s_.substr(dstart, pos_ - dstart));
      }
      return Polynomial::constant(ring_, parse_rational(lit));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\'')) {
        ++pos_;
      }
      const auto name = s_.substr(start, pos_ - start);
      const auto idx = ring_.table().index_of(name);
      if (!idx) fail("unknown variable '" + std::string(name) + "'");
      return Polynomial::variable(ring_, *idx);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const Ring& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const Ring& ring, std::string_view text) { return Parser(ring, text).parse(); }

Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& bindings, const Ring& target) {
  const auto& tab = p.ring().table();
  for (const auto& [name, _] : bindings) {
    if (!tab.index_of(name)) throw Error("substitution binds '" + name + "', which is not a variable of the source");
  }
  std::vector<std::optional<Polynomial>> images(tab.size());
  for (std::size_t i = 0; i < tab.size(); ++i) {
    if (auto it = bindings.find(tab.name(i)); it != bindings.end()) {
      if (it->second.is_zero()) {
        images[i] = Polynomial(target);
      } else if (!it->second.ring().same_table(target)) {
        throw RingMismatch("substitution image for '" + tab.name(i) + "' is not in the target ring");
      } else {
        images[i] = it->second.with_ring(target);
      }
    } else if (auto j = target.table().index_of(tab.name(i))) {
      images[i] = Polynomial::variable(target, *j);
    }
  }
  std::vector<std::vector<Polynomial>> powers(tab.size());
  auto power_of = [&](std::size_t var, std::uint32_t e) -> const Polynomial& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, Rational(1)));
    while (cache.size() <= e) cache.push_back(cache.back() * *images[var]);
    return cache[e];
  };
  std::vector<Term> collected;
  for (const auto& t : p.terms()) {
    Polynomial prod = Polynomial::constant(target, t.coef);
    for (std::size_t i = 0; i < tab.size(); ++i) {
      const auto e = t.mono.exponent(i);
      if (!e) continue;
      if (!images[i]) {
        throw Error("substitution: variable '" + tab.name(i) + "' is unbound and absent from the target");
      }
      prod *= power_of(i, e);
    }
    for (auto& term : prod.terms()) collected.push_back(term);
  }
  return Polynomial::from_terms(target, std::move(collected));
}

Polynomial divide_exact(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw DivisionByZero("exact division by the zero polynomial");
  if (!(f.ring() == g.ring())) throw RingMismatch("divide_exact: ring mismatch");
  const Ring& ring = f.ring();
  Polynomial rem = f;
  std::vector<Term> quotient;
  const Monomial& lg = g.leading_monomial();
  const Rational inv = 1 / g.leading_coef();
  while (!rem.is_zero()) {
    const Term& lt = rem.leading_term();
    if (!lg.divides(lt.mono)) throw InexactDivision("divide_exact: " + g.to_string() + " does not divide the dividend");
    Monomial q = lt.mono / lg;
    Rational c = lt.coef * inv;
    rem = rem.add_scaled(-c, q, g);
    quotient.push_back({q, std::move(c)});
  }
  // quotient terms were produced in strictly descending order
  return Polynomial::from_sorted_terms(ring, std::move(quotient));
}

Polynomial change_ring(const Polynomial& p, const Ring& target) {
  if (p.ring().same_table(target)) return p.with_ring(target);
  const auto& src = p.ring().table();
  std::vector<int> map(src.size(), -1);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (auto j = target.table().index_of(src.name(i))) map[i] = static_cast<int>(*j);
  }
  std::vector<Term> terms;
  terms.reserve(p.size());
  const auto w = target.table().weights();
  for (const auto& t : p.terms()) {
    Monomial m;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto e = t.mono.exponent(i);
      if (!e) continue;
      if (map[i] < 0) throw RingMismatch("change_ring: variable '" + src.name(i) + "' missing from target");
      m.set_exponent(static_cast<std::size_t>(map[i]), e, w);
    }
    terms.push_back({m, t.coef});
  }
  return Polynomial::from_terms(target, std::move(terms));
}

}  // namespace hkq
