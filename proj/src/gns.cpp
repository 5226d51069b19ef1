#include "qdisk/gns.hpp"

#include <cmath>

namespace qdisk {

GnsVector GnsVector::basis(long mode, long k) {
  GnsVector v;
  std::vector<cplx> c(size_t(k) + 1, cplx(0.0));
  c[size_t(k)] = cplx(1.0);
  v.comps_.emplace(mode, std::move(c));
  return v;
}

void GnsVector::set_mode(long n, std::vector<cplx> coeffs) {
  if (coeffs.empty())
    comps_.erase(n);
  else
    comps_[n] = std::move(coeffs);
}

void GnsVector::add_to(long n, long k, cplx v) {
  auto& c = comps_[n];
  if (long(c.size()) <= k) c.resize(size_t(k) + 1, cplx(0.0));
  c[size_t(k)] += v;
}

cplx GnsVector::at(long n, long k) const {
  auto it = comps_.find(n);
  if (it == comps_.end() || k < 0 || k >= long(it->second.size())) return cplx(0.0);
  return it->second[size_t(k)];
}

long GnsVector::max_index(long n) const {
  auto it = comps_.find(n);
  return it == comps_.end() ? -1 : long(it->second.size()) - 1;
}

GnsVector GnsVector::operator+(const GnsVector& o) const {
  GnsVector r = *this;
  for (const auto& [n, c] : o.comps_)
    for (long k = 0; k < long(c.size()); ++k) r.add_to(n, k, c[size_t(k)]);
  return r;
}

GnsVector GnsVector::operator-(const GnsVector& o) const {
  return *this + o.scaled(cplx(-1.0));
}

GnsVector GnsVector::scaled(cplx s) const {
  GnsVector r;
  for (const auto& [n, c] : comps_) {
    std::vector<cplx> d(c.size());
    for (size_t i = 0; i < c.size(); ++i) d[i] = s * c[i];
    r.comps_.emplace(n, std::move(d));
  }
  return r;
}

void GnsVector::trim(double tol) {
  for (auto it = comps_.begin(); it != comps_.end();) {
    auto& c = it->second;
    while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
    it = c.empty() ? comps_.erase(it) : std::next(it);
  }
}

cplx inner(const GnsVector& f, const GnsVector& g, const WeightedSpace& space) {
  cplx s = 0.0;
  for (const auto& [n, fc] : f.components()) {
    auto it = g.components().find(n);
    if (it == g.components().end()) continue;
    const auto& gc = it->second;
    size_t m = std::min(fc.size(), gc.size());
    for (size_t k = 0; k < m; ++k)
      s += space.weight_at(n, long(k)) * std::conj(fc[k]) * gc[k];
  }
  return s;
}

double norm(const GnsVector& f, const WeightedSpace& space) {
  return std::sqrt(std::max(0.0, inner(f, f, space).real()));
}

namespace {

// evaluate a symbol against one finitely supported component pair and
// accumulate into the output vector
void accumulate_term(GnsVector& out, long mode, const DiagonalSymbol& sym, long horizon) {
  for (long k = 0; k <= horizon; ++k) {
    cplx v = sym(k);
    if (v != cplx(0.0)) out.add_to(mode, k, v);
  }
}

DiagonalSymbol symbol_from_array(const std::vector<cplx>& c) {
  return DiagonalSymbol::table(c, cplx(0.0));
}

}  // namespace

GnsVector act(const ToeplitzElement& a, const GnsVector& f) {
  GnsVector out;
  for (const auto& [na, sa] : a.modes()) {
    for (const auto& [nf, fc] : f.components()) {
      DiagonalSymbol r = term_product_symbol(na, sa, nf, symbol_from_array(fc));
      long horizon = long(fc.size()) + std::labs(na) + std::labs(nf) + 2;
      accumulate_term(out, na + nf, r, horizon);
    }
  }
  out.trim();
  return out;
}

GnsVector act_right(const GnsVector& f, const ToeplitzElement& a) {
  GnsVector out;
  for (const auto& [nf, fc] : f.components()) {
    for (const auto& [na, sa] : a.modes()) {
      DiagonalSymbol r = term_product_symbol(nf, symbol_from_array(fc), na, sa);
      long horizon = long(fc.size()) + std::labs(na) + std::labs(nf) + 2;
      accumulate_term(out, na + nf, r, horizon);
    }
  }
  out.trim();
  return out;
}

GnsVector rotate(const GnsVector& f, double theta) {
  GnsVector r;
  for (const auto& [n, c] : f.components()) {
    cplx phase = std::polar(1.0, double(n) * theta);
    std::vector<cplx> d(c.size());
    for (size_t i = 0; i < c.size(); ++i) d[i] = phase * c[i];
    r.set_mode(n, std::move(d));
  }
  return r;
}

bool check_implementing(const ToeplitzElement& a, double theta, const GnsVector& f,
                        const WeightedSpace& space, double tol) {
  GnsVector lhs = act(a.rotated(theta), f);
  GnsVector rhs = rotate(act(a, rotate(f, -theta)), theta);
  return norm(lhs - rhs, space) <= tol;
}

GnsVector gns_embed(const ToeplitzElement& a, long horizon) {
  GnsVector v;
  for (const auto& [n, sym] : a.modes()) {
    std::vector<cplx> c(size_t(horizon) + 1);
    for (long k = 0; k <= horizon; ++k) c[size_t(k)] = sym(k);
    v.set_mode(n, std::move(c));
  }
  v.trim();
  return v;
}

}  // namespace qdisk
