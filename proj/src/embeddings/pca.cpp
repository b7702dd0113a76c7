#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "internal.hpp"

namespace newsent::embed {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw Error(ErrorKind::InvalidArgument, "matrix size does not match n*n");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };
  double scale = 0;
  for (double x : a) scale += x * x;
  scale = std::sqrt(scale);

  for (int sweep = 0; sweep < 100 && scale > 0 && off_norm() > 1e-14 * scale; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a[src * n + src];
    std::size_t big = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v[k * n + src]) > std::abs(v[big * n + src])) big = k;
    const double sign = v[big * n + src] < 0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors[k * n + c] = sign * v[k * n + src];
  }
  return out;
}

Projection pca_project_2d(const EmbeddingMatrix& emb, std::span<const std::string> words) {
  if (words.empty()) throw Error(ErrorKind::InvalidArgument, "no words to project");
  const std::size_t d = emb.dim(), n = words.size();
  std::vector<double> x(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = emb.at(words[i]);
    std::copy(r.begin(), r.end(), x.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += x[i * d + k];
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) x[i * d + k] -= mean[k];

  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < d; ++p) {
      const double xp = x[i * d + p];
      if (xp == 0.0) continue;
      for (std::size_t q = p; q < d; ++q) cov[p * d + q] += xp * x[i * d + q];
    }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p; q < d; ++q) {
      cov[p * d + q] /= static_cast<double>(n);
      cov[q * d + p] = cov[p * d + q];
    }

  Projection out;
  for (std::size_t p = 0; p < d; ++p) out.total_variance += cov[p * d + p];
  const auto eig = jacobi_eigen(std::move(cov), d);
  const std::size_t k = std::min<std::size_t>(2, d);
  for (std::size_t c = 0; c < k; ++c) out.variance_captured += std::max(0.0, eig.values[c]);
  for (std::size_t i = 0; i < n; ++i) {
    ProjectedPoint pt{words[i], 0, 0};
    double coord[2] = {0, 0};
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t q = 0; q < d; ++q) coord[c] += x[i * d + q] * eig.vectors[q * d + c];
    pt.x = coord[0];
    pt.y = coord[1];
    out.points.push_back(std::move(pt));
  }
  return out;
}

void write_projection_csv(const std::filesystem::path& path, const Projection& projection) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  out << "token,x,y\n";
  char buf[64];
  for (const auto& p : projection.points) {
    std::snprintf(buf, sizeof buf, ",%.10g,%.10g\n", p.x, p.y);
    out << p.token << buf;
  }
}

}  // namespace newsent::embed
