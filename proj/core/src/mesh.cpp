#include "semmg/mesh.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace semmg {

MeshConfig MeshConfig::make(int nx, int ny, double lx, double ly) {
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("MeshConfig: need at least 2 elements per direction, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("MeshConfig: extents must be positive");
  return MeshConfig{nx, ny, lx, ly};
}

void Field::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

double Field::mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

void Field::remove_mean() {
  const double m = mean();
  for (double& v : values_) v -= m;
}

Field& Field::operator+=(const Field& other) {
  if (!(layout_ == other.layout_)) throw std::invalid_argument("Field: layout mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(layout_ == other.layout_)) throw std::invalid_argument("Field: layout mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

namespace {

void check_element(const FieldLayout& layout, int ex, int ey) {
  if (ex < 0 || ex >= layout.nx || ey < 0 || ey >= layout.ny)
    throw std::out_of_range("element (" + std::to_string(ex) + "," + std::to_string(ey) +
                            ") outside mesh");
}

}  // namespace

void gather_element(const Field& field, int ex, int ey, std::span<double> block) {
  const auto& layout = field.layout();
  check_element(layout, ex, ey);
  const int n = layout.p + 1;
  for (int j = 0; j < n; ++j) {
    const int gy = layout.global_y(ey, j);
    for (int i = 0; i < n; ++i) block[j * n + i] = field(layout.global_x(ex, i), gy);
  }
}

std::vector<double> gather_element(const Field& field, int ex, int ey) {
  const int n = field.layout().p + 1;
  std::vector<double> block(static_cast<std::size_t>(n) * n);
  gather_element(field, ex, ey, block);
  return block;
}

void scatter_add_element(Field& field, int ex, int ey, std::span<const double> block) {
  const auto layout = field.layout();
  check_element(layout, ex, ey);
  const int n = layout.p + 1;
  for (int j = 0; j < n; ++j) {
    const int gy = layout.global_y(ey, j);
    for (int i = 0; i < n; ++i) field(layout.global_x(ex, i), gy) += block[j * n + i];
  }
}

std::vector<double> node_coordinates_x(const FieldLayout& layout, const MeshConfig& mesh,
                                       std::span<const double> gll_nodes) {
  std::vector<double> x(layout.Nx());
  const double h = mesh.dx();
  for (int e = 0; e < layout.nx; ++e)
    for (int i = 0; i < layout.p; ++i) x[e * layout.p + i] = e * h + 0.5 * h * (gll_nodes[i] + 1.0);
  return x;
}

std::vector<double> node_coordinates_y(const FieldLayout& layout, const MeshConfig& mesh,
                                       std::span<const double> gll_nodes) {
  std::vector<double> y(layout.Ny());
  const double h = mesh.dy();
  for (int e = 0; e < layout.ny; ++e)
    for (int j = 0; j < layout.p; ++j) y[e * layout.p + j] = e * h + 0.5 * h * (gll_nodes[j] + 1.0);
  return y;
}

}  // namespace semmg
