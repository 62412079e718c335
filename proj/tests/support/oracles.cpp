#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

std::vector<double> jacobi_eigenvalues(const Matrix& h) {
  const Index n = h.rows();
  const bool real = h.imag().cwiseAbs().maxCoeff() == 0.0;
  const Index m = real ? n : 2 * n;
  Eigen::MatrixXd a(m, m);
  if (real) {
    a = h.real();
  } else {
    a << h.real(), -h.imag(), h.imag(), h.real();
  }
  a = 0.5 * (a + a.transpose()).eval();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < m; ++p) {
      for (Index q = p + 1; q < m; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Index p = 0; p < m; ++p) {
      for (Index q = p + 1; q < m; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < m; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < m; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) values[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(values.begin(), values.end());
  if (real) return values;
  // The embedding doubles every eigenvalue.
  std::vector<double> halved;
  for (std::size_t i = 0; i < values.size(); i += 2) halved.push_back(0.5 * (values[i] + values[i + 1]));
  return halved;
}

std::vector<double> charpoly_eigenvalues(const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  // det(xI - A) = x^n + c[1] x^{n-1} + ... + c[n]
  std::vector<long double> c(static_cast<std::size_t>(n) + 1, 0.0L);
  c[0] = 1.0L;
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> al = a.cast<long double>();
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  const auto id = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    m = al * m + c[static_cast<std::size_t>(k - 1)] * id;
    c[static_cast<std::size_t>(k)] = -(al * m).trace() / static_cast<long double>(k);
  }
  auto p = [&](long double x) {
    long double v = 0.0L;
    for (auto ci : c) v = v * x + ci;
    return v;
  };

  double radius = 0.0;
  for (Index i = 0; i < n; ++i) radius = std::max(radius, a.row(i).cwiseAbs().sum());
  const int grid = 20000;
  const double lo = -radius - 1.0;
  const double step = (2.0 * radius + 2.0) / grid;
  std::vector<double> roots;
  long double prev = p(lo);
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + i * step;
    const long double cur = p(x);
    if (cur == 0.0L) {
      roots.push_back(x);
    } else if ((prev < 0) != (cur < 0) && prev != 0.0L) {
      long double l = x - step;
      long double r = x;
      for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (l + r);
        if ((p(mid) < 0) == (p(l) < 0)) {
          l = mid;
        } else {
          r = mid;
        }
      }
      roots.push_back(static_cast<double>(0.5L * (l + r)));
    }
    prev = cur;
  }
  return roots;
}

Matrix gram_schmidt(const Matrix& m, double drop) {
  double scale = 0.0;
  for (Index c = 0; c < m.cols(); ++c) scale = std::max(scale, m.col(c).norm());
  std::vector<Vector> basis;
  for (Index c = 0; c < m.cols(); ++c) {
    Vector v = m.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q.dot(v) * q;
    }
    const double norm = v.norm();
    if (norm > drop * scale && norm > 0.0) basis.push_back(v / norm);
  }
  Matrix q(m.rows(), static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) q.col(static_cast<Index>(i)) = basis[i];
  return q;
}

double distance_to_span(const Matrix& a, const Matrix& b) {
  const Matrix q = gram_schmidt(a);
  const Matrix r = b - q * (q.adjoint() * b);
  double worst = 0.0;
  for (Index c = 0; c < r.cols(); ++c) worst = std::max(worst, r.col(c).norm());
  return worst;
}

Matrix frame_operator(const framelab::GFusionSystem& system) {
  const Index n = system.dim();
  Matrix s = Matrix::Zero(n, n);
  for (const auto& member : system.members()) {
    const Matrix q = gram_schmidt(member.subspace.basis());
    const Matrix p = q * q.adjoint();
    const double w2 = member.subspace.weight() * member.subspace.weight();
    const Matrix images = member.local.matrix * p;  // column b is Lambda pi e_b
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        framelab::Complex form = 0.0;
        for (Index r = 0; r < images.rows(); ++r) form += std::conj(images(r, a)) * images(r, b);
        s(a, b) += w2 * form;
      }
    }
  }
  return s;
}

double min_eigenvalue(const Matrix& h) { return jacobi_eigenvalues(h).front(); }

double psd_bisection(const Matrix& g2, const Matrix& g1) {
  const auto scale = [](const Matrix& m) {
    const auto ev = jacobi_eigenvalues(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
  };
  const double floor = 1e-15 * scale(g2);
  auto ok = [&](double a) { return min_eigenvalue(g2 - a * g1) >= -floor; };
  double lo = 0.0;
  double hi = 1.0;
  while (ok(hi) && hi < 1e300) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::string source_path(const std::string& relative) { return std::string(FRAMELAB_SOURCE_DIR) + "/" + relative; }

framelab::FrameDocument load_fixture(const std::string& name) {
  return framelab::load_document(source_path("fixtures/" + name + ".json"));
}

Json load_oracle(const std::string& name) {
  return framelab::parse_json_text(framelab::read_text_file(source_path("fixtures/" + name + ".oracle.json")));
}

Json load_corpus(const std::string& kind) {
  return framelab::parse_json_text(framelab::read_text_file(source_path("fixtures/corpus/" + kind + ".json")));
}

framelab::Field field_of(const Json& c) { return framelab::field_from_string(c.at("field").get<std::string>()); }

}  // namespace oracle
