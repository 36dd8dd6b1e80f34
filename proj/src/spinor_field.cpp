#include "spindirac/spinor_field.hpp"

#include "spindirac/errors.hpp"

namespace spindirac {

namespace {

void check_grid(int n) {
  if (n < 4 || n % 2 != 0) throw SizeError("grid size must be even and >= 4");
}

}  // namespace

SpinorField::SpinorField(const Lattice& lat, const SpinStructure& spin, int n)
    : lat_(lat), spin_(spin), n_(n) {
  check_grid(n);
  plus_.assign(static_cast<std::size_t>(n) * n, cplx{});
  minus_.assign(plus_.size(), cplx{});
}

SpinorField::SpinorField(const Lattice& lat, const SpinStructure& spin, int n,
                         std::vector<cplx> plus, std::vector<cplx> minus)
    : lat_(lat), spin_(spin), n_(n), plus_(std::move(plus)), minus_(std::move(minus)) {
  check_grid(n);
  const auto expected = static_cast<std::size_t>(n) * n;
  if (plus_.size() != expected || minus_.size() != expected) {
    throw SizeError("half-spinor arrays must both have n*n samples");
  }
}

bool SpinorField::compatible(const SpinorField& other) const {
  return n_ == other.n_ && spin_ == other.spin_ && lat_ == other.lat_;
}

SpinorField& SpinorField::operator+=(const SpinorField& o) {
  axpy(1.0, o);
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& o) {
  axpy(-1.0, o);
  return *this;
}

SpinorField& SpinorField::operator*=(cplx a) {
  for (auto& v : plus_) v *= a;
  for (auto& v : minus_) v *= a;
  return *this;
}

void SpinorField::axpy(cplx a, const SpinorField& o) {
  if (!compatible(o)) throw SizeError("spinor fields live on different grids");
  for (std::size_t i = 0; i < plus_.size(); ++i) {
    plus_[i] += a * o.plus_[i];
    minus_[i] += a * o.minus_[i];
  }
}

SpinorField SpinorField::on_lattice(const Lattice& lat) const {
  return SpinorField(lat, spin_, n_, plus_, minus_);
}

}  // namespace spindirac
