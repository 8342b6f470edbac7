#include "scherk/geometry.hpp"

#include <cmath>
#include <random>

namespace scherk {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, what);
}

void require_finite(const GroupPoint& p, const char* what) {
  if (!p.finite()) throw Error(ErrorCode::NonFinite, what);
}

// Taylor series with scaling and squaring; terms are dropped once they fall
// below 1e-14 relative to the running sum.
Matrix2 exp_series(const Matrix2& M) {
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix2 X = M / std::ldexp(1.0, squarings);
  Matrix2 sum = Matrix2::Identity();
  Matrix2 term = Matrix2::Identity();
  for (int k = 1; k < 60; ++k) {
    term = term * X / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-14 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

Matrix2 adjugate(const Matrix2& M) {
  Matrix2 r;
  r << M(1, 1), -M(0, 1), -M(1, 0), M(0, 0);
  return r;
}

}  // namespace

ModelMatrix::ModelMatrix(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(d)) {
    throw Error(ErrorCode::NonFinite, "model matrix entries must be finite");
  }
}

ModelMatrix ModelMatrix::sol_family(double v) {
  if (!std::isfinite(v) || v < 1.0) {
    throw Error(ErrorCode::InvalidConfig, "solc parameter must be >= 1");
  }
  return {0.0, v, 1.0 / v, 0.0};
}

Matrix2 ModelMatrix::matrix() const {
  Matrix2 m;
  m << a_, b_, c_, d_;
  return m;
}

bool GroupPoint::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double MetricTensor::norm(const Vec3& u) const { return std::sqrt(inner(u, u)); }

KillingField::KillingField(double cx_, double cy_) : cx(cx_), cy(cy_) {
  if (cx == 0.0 && cy == 0.0) {
    throw Error(ErrorCode::InvalidConfig, "Killing field must be nonzero");
  }
}

bool requires_antidiagonal(const IsometryDescriptor& iso) {
  return std::holds_alternative<HorizontalRotationParallelX>(iso) ||
         std::holds_alternative<HorizontalRotationParallelY>(iso);
}

Matrix2 exp_at(const ModelMatrix& A, double z) {
  require_finite(z, "exp_at: z");
  if (!A.antidiagonal()) return exp_series(z * A.matrix());

  const double b = A.b();
  const double c = A.c();
  const double bc = b * c;
  double diag = 1.0;
  double odd = z;  // odd part, without the b or c factor
  if (bc > 0.0) {
    const double k = std::sqrt(bc);
    diag = std::cosh(k * z);
    odd = std::sinh(k * z) / k;
  } else if (bc < 0.0) {
    const double k = std::sqrt(-bc);
    diag = std::cos(k * z);
    odd = std::sin(k * z) / k;
  }
  Matrix2 m;
  m << diag, b * odd, c * odd, diag;
  return m;
}

Matrix2 exp_derivative_at(const ModelMatrix& A, double z) {
  return A.matrix() * exp_at(A, z);
}

GroupPoint group_multiply(const ModelMatrix& A, const GroupPoint& g1,
                          const GroupPoint& g2) {
  require_finite(g1, "group_multiply: g1");
  require_finite(g2, "group_multiply: g2");
  const Eigen::Vector2d p = Eigen::Vector2d(g1.x, g1.y) +
                            exp_at(A, g1.z) * Eigen::Vector2d(g2.x, g2.y);
  return {p.x(), p.y(), g1.z + g2.z};
}

// The dual coframe of E1, E2 is the rows of e^{-zA} = adj(e^{zA}) e^{-z tr A},
// so the leaf block is e^{-2 z tr A} adj^T adj.
Matrix2 metric_block(const ModelMatrix& A, double z) {
  const Matrix2 inv = adjugate(exp_at(A, z)) * std::exp(-z * A.trace());
  return inv.transpose() * inv;
}

Matrix2 metric_block_derivative(const ModelMatrix& A, double z) {
  const double scale = std::exp(-z * A.trace());
  const Matrix2 inv = adjugate(exp_at(A, z)) * scale;
  const Matrix2 dinv =
      (adjugate(exp_derivative_at(A, z)) - A.trace() * adjugate(exp_at(A, z))) *
      scale;
  return dinv.transpose() * inv + inv.transpose() * dinv;
}

MetricTensor metric_at(const ModelMatrix& A, const GroupPoint& p) {
  require_finite(p, "metric_at: p");
  const Matrix2 block = metric_block(A, p.z);
  MetricTensor m;
  m.g.setZero();
  m.g.topLeftCorner<2, 2>() = block;
  m.g(2, 2) = 1.0;
  if (!(block(0, 0) > 0.0) || !(block.determinant() > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "metric_at: leaf block");
  }
  return m;
}

FrameTriple left_frame(const ModelMatrix& A, const GroupPoint& p) {
  require_finite(p, "left_frame: p");
  const Matrix2 e = exp_at(A, p.z);
  FrameTriple f;
  f.e1 = {p, e(0, 0), e(1, 0), 0.0};
  f.e2 = {p, e(0, 1), e(1, 1), 0.0};
  f.e3 = {p, 0.0, 0.0, 1.0};
  return f;
}

Christoffel christoffel_at(const ModelMatrix& A, const GroupPoint& p) {
  require_finite(p, "christoffel_at: p");
  Christoffel G{};
  const Matrix2 g = metric_block(A, p.z);
  const Matrix2 dg = metric_block_derivative(A, p.z);
  const Matrix2 mixed = 0.5 * g.inverse() * dg;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      G[2][a][b] = -0.5 * dg(a, b);
      G[a][b][2] = mixed(a, b);
      G[a][2][b] = mixed(a, b);
    }
  }
  return G;
}

Christoffel frame_connection(const ModelMatrix& A, const GroupPoint& p) {
  const FrameTriple f = left_frame(A, p);
  const Christoffel G = christoffel_at(A, p);
  const MetricTensor m = metric_at(A, p);
  const Matrix2 de = exp_derivative_at(A, p.z);
  const std::array<Vec3, 3> E = {f.e1.vec(), f.e2.vec(), f.e3.vec()};
  const std::array<Vec3, 3> dE = {Vec3(de(0, 0), de(1, 0), 0.0),
                                  Vec3(de(0, 1), de(1, 1), 0.0), Vec3::Zero()};
  Christoffel out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Vec3 nabla = E[i].z() * dE[j];
      for (int k = 0; k < 3; ++k) {
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) nabla[k] += G[k][a][b] * E[i][a] * E[j][b];
        }
      }
      for (int k = 0; k < 3; ++k) out[i][j][k] = m.inner(nabla, E[k]);
    }
  }
  return out;
}

namespace {

Vec3 geodesic_acceleration(const ModelMatrix& A, const Vec3& x, const Vec3& v) {
  const Christoffel G = christoffel_at(A, GroupPoint::from(x));
  Vec3 acc = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) acc[k] -= G[k][i][j] * v[i] * v[j];
    }
  }
  return acc;
}

}  // namespace

std::vector<GeodesicSample> geodesic_with_velocity(const ModelMatrix& A,
                                                   const GroupPoint& p0,
                                                   const TangentVec& v0,
                                                   double T, int n) {
  if (n < 2) throw Error(ErrorCode::StepCountTooSmall, "geodesic needs n >= 2");
  require_finite(p0, "geodesic: p0");
  require_finite(T, "geodesic: T");
  const Vec3 v_init = v0.vec();
  if (!v_init.allFinite()) throw Error(ErrorCode::NonFinite, "geodesic: v0");
  if (!(T > 0.0) || !(metric_at(A, p0).norm(v_init) > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "geodesic: need T > 0 and |v0| > 0");
  }

  const double dt = T / n;
  Vec3 x = p0.vec();
  Vec3 v = v_init;
  std::vector<GeodesicSample> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back({p0, v});
  for (int s = 0; s < n; ++s) {
    const Vec3 k1x = v;
    const Vec3 k1v = geodesic_acceleration(A, x, v);
    const Vec3 k2x = v + 0.5 * dt * k1v;
    const Vec3 k2v = geodesic_acceleration(A, x + 0.5 * dt * k1x, k2x);
    const Vec3 k3x = v + 0.5 * dt * k2v;
    const Vec3 k3v = geodesic_acceleration(A, x + 0.5 * dt * k2x, k3x);
    const Vec3 k4x = v + dt * k3v;
    const Vec3 k4v = geodesic_acceleration(A, x + dt * k3x, k4x);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    out.push_back({GroupPoint::from(x), v});
  }
  return out;
}

std::vector<GroupPoint> geodesic(const ModelMatrix& A, const GroupPoint& p0,
                                 const TangentVec& v0, double T, int n) {
  std::vector<GroupPoint> pts;
  for (const auto& s : geodesic_with_velocity(A, p0, v0, T, n)) {
    pts.push_back(s.point);
  }
  return pts;
}

IsometryImage map_unchecked(const ModelMatrix& A,
                            const IsometryDescriptor& iso,
                            const GroupPoint& p) {
  require_finite(p, "isometry: p");
  return std::visit(
      [&](const auto& d) -> IsometryImage {
        using T = std::decay_t<decltype(d)>;
        IsometryImage img;
        img.differential.setZero();
        if constexpr (std::is_same_v<T, LeftTranslation>) {
          img.point = group_multiply(A, d.by, p);
          img.differential.topLeftCorner<2, 2>() = exp_at(A, d.by.z);
          img.differential(2, 2) = 1.0;
        } else if constexpr (std::is_same_v<T, VerticalRotation>) {
          img.point = {-p.x + 2.0 * d.x0, -p.y + 2.0 * d.y0, p.z};
          img.differential.diagonal() << -1.0, -1.0, 1.0;
        } else if constexpr (std::is_same_v<T, HorizontalRotationParallelY>) {
          img.point = {-p.x + 2.0 * d.x0, p.y, -p.z};
          img.differential.diagonal() << -1.0, 1.0, -1.0;
        } else {
          img.point = {p.x, -p.y + 2.0 * d.y0, -p.z};
          img.differential.diagonal() << 1.0, -1.0, -1.0;
        }
        return img;
      },
      iso);
}

IsometryImage apply_isometry(const ModelMatrix& A,
                             const IsometryDescriptor& iso,
                             const GroupPoint& p) {
  if (requires_antidiagonal(iso) && !A.antidiagonal()) {
    throw Error(ErrorCode::InvalidForModel,
                "horizontal pi-rotations need an antidiagonal model matrix");
  }
  return map_unchecked(A, iso, p);
}

double verify_isometry(const ModelMatrix& A, const IsometryDescriptor& iso,
                       int n_samples) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidConfig, "n_samples >= 1");
  std::mt19937_64 rng(0x5eed1234u);
  std::uniform_real_distribution<double> horiz(-2.0, 2.0);
  std::uniform_real_distribution<double> vert(-1.5, 1.5);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const GroupPoint p{horiz(rng), horiz(rng), vert(rng)};
    const MetricTensor gp = metric_at(A, p);
    const IsometryImage img = map_unchecked(A, iso, p);
    const MetricTensor gq = metric_at(A, img.point);
    Vec3 u(gauss(rng), gauss(rng), gauss(rng));
    Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    u /= gp.norm(u);
    v /= gp.norm(v);
    const std::array<std::pair<Vec3, Vec3>, 3> pairs = {
        std::pair{u, u}, std::pair{v, v}, std::pair{u, v}};
    for (const auto& [a, b] : pairs) {
      const double pulled = gq.inner(img.differential * a, img.differential * b);
      worst = std::max(worst, std::abs(pulled - gp.inner(a, b)));
    }
  }
  return worst;
}

}  // namespace scherk
