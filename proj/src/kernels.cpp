#include "geodnc/kernels.hpp"

#include <omp.h>

namespace geodnc::kernels {

namespace {

struct Layout {
  std::vector<std::size_t> offsets;  // 2^k offsets of the target sub-block
  std::size_t target_mask = 0;
};

Layout make_layout(std::span<const int> positions) {
  Layout l;
  const std::size_t k = positions.size();
  l.offsets.assign(std::size_t{1} << k, 0);
  for (std::size_t j = 0; j < l.offsets.size(); ++j)
    for (std::size_t b = 0; b < k; ++b)
      if (j >> b & 1) l.offsets[j] |= std::size_t{1} << positions[b];
  for (int p : positions) l.target_mask |= std::size_t{1} << p;
  return l;
}

// Spreads the bits of `r` over the positions not in `mask`.
inline std::size_t deposit(std::size_t r, std::size_t mask) {
  std::size_t out = 0;
  for (std::size_t bit = 1; r != 0; bit <<= 1) {
    if (mask & bit) continue;
    if (r & 1) out |= bit;
    r >>= 1;
  }
  return out;
}

inline void apply_block(Vector& amps, std::size_t base, const Layout& l, const Matrix& m,
                        Vector& in, Vector& out) {
  for (std::size_t j = 0; j < l.offsets.size(); ++j) in[j] = amps[base | l.offsets[j]];
  out.noalias() = m * in;
  for (std::size_t j = 0; j < l.offsets.size(); ++j) amps[base | l.offsets[j]] = out[j];
}

}  // namespace

void apply_matrix_serial(Vector& amps, std::span<const int> positions, const Matrix& m) {
  const Layout l = make_layout(positions);
  const std::size_t nblocks = static_cast<std::size_t>(amps.size()) >> positions.size();
  Vector in(l.offsets.size()), out(l.offsets.size());
  for (std::size_t r = 0; r < nblocks; ++r)
    apply_block(amps, deposit(r, l.target_mask), l, m, in, out);
}

void apply_matrix_omp(Vector& amps, std::span<const int> positions, const Matrix& m) {
  const Layout l = make_layout(positions);
  const auto nblocks = static_cast<std::int64_t>(static_cast<std::size_t>(amps.size()) >>
                                                 positions.size());
#pragma omp parallel
  {
    Vector in(l.offsets.size()), out(l.offsets.size());
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < nblocks; ++r)
      apply_block(amps, deposit(static_cast<std::size_t>(r), l.target_mask), l, m, in, out);
  }
}

Matrix gather_serial(const Vector& amps, int nbits, std::span<const int> keep) {
  const Layout l = make_layout(keep);
  const std::size_t rows = l.offsets.size();
  const std::size_t cols = std::size_t{1} << (nbits - static_cast<int>(keep.size()));
  Matrix x(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t base = deposit(c, l.target_mask);
    for (std::size_t r = 0; r < rows; ++r) x(r, c) = amps[base | l.offsets[r]];
  }
  return x;
}

Matrix gather_omp(const Vector& amps, int nbits, std::span<const int> keep) {
  const Layout l = make_layout(keep);
  const std::size_t rows = l.offsets.size();
  const auto cols = static_cast<std::int64_t>(std::size_t{1}
                                              << (nbits - static_cast<int>(keep.size())));
  Matrix x(rows, cols);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < cols; ++c) {
    const std::size_t base = deposit(static_cast<std::size_t>(c), l.target_mask);
    for (std::size_t r = 0; r < rows; ++r) x(r, c) = amps[base | l.offsets[r]];
  }
  return x;
}

void scatter_serial(Vector& amps, std::span<const int> keep, const Matrix& x) {
  const Layout l = make_layout(keep);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const std::size_t base = deposit(static_cast<std::size_t>(c), l.target_mask);
    for (std::size_t r = 0; r < l.offsets.size(); ++r) amps[base | l.offsets[r]] = x(r, c);
  }
}

void scatter_omp(Vector& amps, std::span<const int> keep, const Matrix& x) {
  const Layout l = make_layout(keep);
  const auto cols = static_cast<std::int64_t>(x.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < cols; ++c) {
    const std::size_t base = deposit(static_cast<std::size_t>(c), l.target_mask);
    for (std::size_t r = 0; r < l.offsets.size(); ++r) amps[base | l.offsets[r]] = x(r, c);
  }
}

Vector project_zero(const Vector& amps, int pos) {
  const std::size_t half = static_cast<std::size_t>(amps.size()) / 2;
  const std::size_t low = (std::size_t{1} << pos) - 1;
  Vector out(half);
  for (std::size_t r = 0; r < half; ++r) out[r] = amps[(r & low) | ((r & ~low) << 1)];
  return out;
}

double weight_with_zeros(const Vector& amps, std::span<const int> zeros) {
  std::size_t mask = 0;
  for (int p : zeros) mask |= std::size_t{1} << p;
  double w = 0;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if ((static_cast<std::size_t>(i) & mask) == 0) w += std::norm(amps[i]);
  return w;
}

}  // namespace geodnc::kernels
