#include "tisr/dense.hpp"

#include <algorithm>

namespace tisr::dense {

namespace {

std::size_t clamp_to(long long i, std::size_t n) {
  return static_cast<std::size_t>(std::clamp<long long>(i, 0, static_cast<long long>(n) - 1));
}

}  // namespace

Eigen::VectorXd to_vector(const Image& img) {
  auto p = img.pixels();
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

Image to_image(const Eigen::VectorXd& v, std::size_t height, std::size_t width) {
  return Image::from_pixels(height, width, std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::MatrixXd blur_matrix(std::size_t h, std::size_t w, const Kernel& kernel) {
  const auto n = static_cast<Eigen::Index>(h * w);
  const auto rad = static_cast<long long>(kernel.radius());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t i = 0; i < kernel.size(); ++i) {
        for (std::size_t j = 0; j < kernel.size(); ++j) {
          const std::size_t sr = clamp_to(static_cast<long long>(r + i) - rad, h);
          const std::size_t sc = clamp_to(static_cast<long long>(c + j) - rad, w);
          m(static_cast<Eigen::Index>(r * w + c), static_cast<Eigen::Index>(sr * w + sc)) +=
              kernel(i, j);
        }
      }
    }
  }
  return m;
}

Eigen::MatrixXd decimation_matrix(std::size_t h, std::size_t w, std::size_t factor) {
  const std::size_t lh = h / factor;
  const std::size_t lw = w / factor;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lh * lw),
                                            static_cast<Eigen::Index>(h * w));
  for (std::size_t r = 0; r < lh; ++r) {
    for (std::size_t c = 0; c < lw; ++c) {
      m(static_cast<Eigen::Index>(r * lw + c),
        static_cast<Eigen::Index>(factor * r * w + factor * c)) = 1.0;
    }
  }
  return m;
}

Eigen::MatrixXd shift_matrix(std::size_t h, std::size_t w, int rows, int cols) {
  const auto n = static_cast<Eigen::Index>(h * w);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t sr = clamp_to(static_cast<long long>(r) - rows, h);
      const std::size_t sc = clamp_to(static_cast<long long>(c) + cols, w);
      m(static_cast<Eigen::Index>(r * w + c), static_cast<Eigen::Index>(sr * w + sc)) = 1.0;
    }
  }
  return m;
}

Eigen::MatrixXd stacked_matrix(const DegradationModel& model) {
  const std::size_t h = model.hr_height;
  const std::size_t w = model.hr_width;
  const Eigen::MatrixXd db =
      decimation_matrix(h, w, model.factor) * blur_matrix(h, w, model.kernel);
  const Eigen::MatrixXd dbs = db * shift_matrix(h, w, model.shift_rows, model.shift_cols);
  Eigen::MatrixXd H(db.rows() + dbs.rows(), db.cols());
  H << db, dbs;
  return H;
}

Eigen::MatrixXd patch_matrix(const PatchGrid& grid, std::size_t k) {
  const std::size_t q = grid.patch_size;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q * q),
                                            static_cast<Eigen::Index>(grid.image_h * grid.image_w));
  const std::size_t row0 = (k / grid.cols()) * grid.stride;
  const std::size_t col0 = (k % grid.cols()) * grid.stride;
  for (std::size_t r = 0; r < q; ++r) {
    for (std::size_t c = 0; c < q; ++c) {
      p(static_cast<Eigen::Index>(r * q + c),
        static_cast<Eigen::Index>((row0 + r) * grid.image_w + col0 + c)) = 1.0;
    }
  }
  return p;
}

Eigen::MatrixXd laplacian_matrix(const SelfSimGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.grid.image_h * graph.grid.image_w);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges) {
    const Eigen::MatrixXd diff = patch_matrix(graph.grid, e.i) - patch_matrix(graph.grid, e.j);
    L += e.alpha * diff.transpose() * diff;
  }
  return L;
}

Eigen::VectorXd stack(const StackedObservation& obs) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(obs.y1.size() + obs.y2.size()));
  y << to_vector(obs.y1), to_vector(obs.y2);
  return y;
}

Image direct_minimizer(const StackedObservation& obs, const DegradationModel& model,
                       const SelfSimGraph& graph, double lambda) {
  const Eigen::MatrixXd H = stacked_matrix(model);
  Eigen::MatrixXd A = H.transpose() * H;
  if (lambda != 0.0) A += lambda * laplacian_matrix(graph);
  const Eigen::VectorXd b = H.transpose() * stack(obs);
  const Eigen::VectorXd z = A.completeOrthogonalDecomposition().solve(b);
  return to_image(z, model.hr_height, model.hr_width);
}

Image woodbury_solve(const DegradationModel& model, double c, const Image& rhs) {
  const Eigen::MatrixXd H = stacked_matrix(model);
  const Eigen::MatrixXd phi =
      (Eigen::MatrixXd::Identity(H.rows(), H.rows()) + H * H.transpose() / c).inverse();
  const Eigen::VectorXd v = to_vector(rhs);
  const Eigen::VectorXd x = (v - H.transpose() * (phi * (H * v)) / c) / c;
  return to_image(x, model.hr_height, model.hr_width);
}

}  // namespace tisr::dense
