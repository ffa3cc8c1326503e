#include "pbprop/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <ostream>
#include <string>

#include "pbprop/error.hpp"
#include "pbprop/limits.hpp"

namespace pbprop {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      return false;
  return true;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw InputError("not a rational literal: \"" + std::string(text) + "\"");
}

} // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0)
    throw InputError("zero denominator");
  q_ = mpq_class(numerator, denominator);
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  bool negative = false;
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  mpq_class q;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      bad_literal(text);
    mpz_class d(std::string(den), 10);
    if (d == 0)
      throw InputError("zero denominator in \"" + std::string(text) + "\"");
    q = mpq_class(mpz_class(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) ||
        (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      bad_literal(text);
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    q = mpq_class(mpz_class(digits, 10), scale);
  } else {
    if (!all_digits(body))
      bad_literal(text);
    q = mpq_class(mpz_class(std::string(body), 10));
  }
  q.canonicalize();
  if (negative)
    q = -q;
  return Rational(std::move(q));
}

std::string Rational::str() const {
  if (q_.get_den() == 1)
    return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

bool Rational::is_integer() const { return q_.get_den() == 1; }

Rational &Rational::operator+=(const Rational &o) {
  q_ += o.q_;
  return *this;
}
Rational &Rational::operator-=(const Rational &o) {
  q_ -= o.q_;
  return *this;
}
Rational &Rational::operator*=(const Rational &o) {
  q_ *= o.q_;
  return *this;
}
Rational &Rational::operator/=(const Rational &o) {
  if (o.is_zero())
    throw std::domain_error("rational division by zero");
  q_ /= o.q_;
  return *this;
}

Rational operator-(const Rational &a) { return Rational(mpq_class(-a.q_)); }

Rational min(const Rational &a, const Rational &b) { return b < a ? b : a; }
Rational max(const Rational &a, const Rational &b) { return a < b ? b : a; }

std::ostream &operator<<(std::ostream &os, const Rational &r) {
  return os << r.str();
}

namespace {
void read_env(const char *name, std::size_t &slot) {
  if (const char *v = std::getenv(name); v != nullptr && *v != '\0') {
    char *end = nullptr;
    const unsigned long long parsed = std::strtoull(v, &end, 10);
    if (end == nullptr || *end != '\0' || parsed == 0)
      throw InputError(std::string("invalid value for ") + name + ": " + v);
    slot = static_cast<std::size_t>(parsed);
  }
}
} // namespace

Limits Limits::from_environment() {
  Limits l;
  read_env("PBPROP_MAX_VOTERS", l.max_voters);
  read_env("PBPROP_MAX_PROJECTS", l.max_projects);
  read_env("PBPROP_MAX_PAV_PROJECTS", l.max_pav_projects);
  read_env("PBPROP_MAX_LP_VARIABLES", l.max_lp_variables);
  read_env("PBPROP_MAX_LP_CONSTRAINTS", l.max_lp_constraints);
  read_env("PBPROP_MAX_LAMINAR_BUNDLES", l.max_laminar_bundles);
  return l;
}

} // namespace pbprop
