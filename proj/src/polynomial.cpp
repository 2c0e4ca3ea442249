#include "phasespace/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "phasespace/error.hpp"

namespace phasespace {

namespace {

// n! / (n - k)!
double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

}  // namespace

PolySymbol PolySymbol::constant(cplx c) { return monomial(0, 0, c); }

PolySymbol PolySymbol::monomial(int q_power, int p_power, cplx c) {
  PolySymbol s;
  s.add_term(q_power, p_power, c);
  return s;
}

cplx PolySymbol::coefficient(int q_power, int p_power) const {
  const auto it = terms_.find({q_power, p_power});
  return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

void PolySymbol::add_term(int q_power, int p_power, cplx c) {
  if (q_power < 0 || p_power < 0) throw Error(ErrorCode::InvalidArgument, "negative monomial power");
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw Error(ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
  if (c == cplx(0.0, 0.0)) return;
  auto [it, inserted] = terms_.try_emplace({q_power, p_power}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0, 0.0)) terms_.erase(it);
  }
}

int PolySymbol::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.first + m.second);
  return d;
}

cplx PolySymbol::operator()(double q, double p) const {
  cplx acc(0.0, 0.0);
  for (const auto& [m, c] : terms_) acc += c * std::pow(q, m.first) * std::pow(p, m.second);
  return acc;
}

PolySymbol PolySymbol::d_q(int order) const {
  PolySymbol out;
  for (const auto& [m, c] : terms_)
    if (m.first >= order) out.add_term(m.first - order, m.second, c * falling(m.first, order));
  return out;
}

PolySymbol PolySymbol::d_p(int order) const {
  PolySymbol out;
  for (const auto& [m, c] : terms_)
    if (m.second >= order) out.add_term(m.first, m.second - order, c * falling(m.second, order));
  return out;
}

double PolySymbol::coefficient_norm() const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) acc += std::norm(c);
  return std::sqrt(acc);
}

PolySymbol PolySymbol::pruned(double tol) const {
  PolySymbol out;
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) out.terms_.emplace(m, c);
  return out;
}

PolySymbol PolySymbol::conj() const {
  PolySymbol out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, std::conj(c));
  return out;
}

PolySymbol& PolySymbol::operator+=(const PolySymbol& o) {
  for (const auto& [m, c] : o.terms_) add_term(m.first, m.second, c);
  return *this;
}

PolySymbol& PolySymbol::operator-=(const PolySymbol& o) {
  for (const auto& [m, c] : o.terms_) add_term(m.first, m.second, -c);
  return *this;
}

PolySymbol& PolySymbol::operator*=(cplx s) {
  if (s == cplx(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  PolySymbol out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma.first + mb.first, ma.second + mb.second, ca * cb);
  return out;
}

std::string PolySymbol::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (m.first) os << " q^" << m.first;
    if (m.second) os << " p^" << m.second;
  }
  return os.str();
}

double distance(const PolySymbol& a, const PolySymbol& b) { return (a - b).coefficient_norm(); }

}  // namespace phasespace
