#include "polardyn/block_schur.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace polardyn {

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

double off_block_norm(const Mat& kt_a_k, const std::vector<SchurBlock>& blocks) {
  Mat masked = kt_a_k;
  for (const SchurBlock& b : blocks) masked.block(b.offset, b.offset, b.size, b.size).setZero();
  return masked.norm();
}

void BlockSchur::permute(const std::vector<std::size_t>& order) {
  Mat new_k(k.rows(), k.cols());
  std::vector<SchurBlock> new_blocks;
  new_blocks.reserve(blocks.size());
  int offset = 0;
  for (std::size_t idx : order) {
    SchurBlock b = blocks.at(idx);
    new_k.middleCols(offset, b.size) = k.middleCols(b.offset, b.size);
    b.offset = offset;
    offset += b.size;
    new_blocks.push_back(b);
  }
  k = std::move(new_k);
  blocks = std::move(new_blocks);
}

BlockSchur block_schur_normal(const Mat& a, double pair_tol) {
  const auto n = a.rows();
  BlockSchur out;
  if (n == 0) return out;
  Eigen::RealSchur<Mat> schur(a);
  if (schur.info() != Eigen::Success) throw NumericalError("block_schur_normal: real Schur failed");
  const Mat& t = schur.matrixT();
  Mat u = schur.matrixU();

  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  const double sub_tol = 1e-14 * scale;

  struct Raw {
    Eigen::Index col;
    int size;
    double re;
    double im;
  };
  std::vector<Raw> complex_blocks;
  std::vector<Raw> real_blocks;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && std::abs(t(i + 1, i)) > sub_tol) {
      const Eigen::Matrix2d b = t.block<2, 2>(i, i);
      double re = 0.5 * (b(0, 0) + b(1, 1));
      double im = 0.5 * (b(1, 0) - b(0, 1));
      if (im < 0) {
        u.col(i + 1) = -u.col(i + 1);
        im = -im;
      }
      complex_blocks.push_back({i, 2, re, im});
      i += 2;
    } else {
      real_blocks.push_back({i, 1, t(i, i), 0.0});
      i += 1;
    }
  }

  // Pair equal real eigenvalues into planes.
  std::vector<bool> used(real_blocks.size(), false);
  std::vector<std::pair<Raw, Raw>> pairs;
  std::vector<Raw> singles;
  for (std::size_t p = 0; p < real_blocks.size(); ++p) {
    if (used[p]) continue;
    used[p] = true;
    bool paired = false;
    for (std::size_t q = p + 1; q < real_blocks.size(); ++q) {
      if (used[q]) continue;
      const double tol = pair_tol * std::max(1.0, std::abs(real_blocks[p].re));
      if (std::abs(real_blocks[p].re - real_blocks[q].re) <= tol) {
        used[q] = true;
        pairs.emplace_back(real_blocks[p], real_blocks[q]);
        paired = true;
        break;
      }
    }
    if (!paired) singles.push_back(real_blocks[p]);
  }

  out.k.resize(n, n);
  int offset = 0;
  // Keep Schur order for complex blocks, then paired planes, then lines.
  for (const Raw& r : complex_blocks) {
    out.k.middleCols(offset, 2) = u.middleCols(r.col, 2);
    out.blocks.push_back({offset, 2, r.re, r.im});
    offset += 2;
  }
  for (const auto& [first, second] : pairs) {
    out.k.col(offset) = u.col(first.col);
    out.k.col(offset + 1) = u.col(second.col);
    out.blocks.push_back({offset, 2, 0.5 * (first.re + second.re), 0.0});
    offset += 2;
  }
  for (const Raw& r : singles) {
    out.k.col(offset) = u.col(r.col);
    out.blocks.push_back({offset, 1, r.re, 0.0});
    offset += 1;
  }
  out.off_block_residual = off_block_norm(out.k.transpose() * a * out.k, out.blocks);
  return out;
}

}  // namespace polardyn
