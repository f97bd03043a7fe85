#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace semmg {

/// Uniform Cartesian element grid on [0, lx] x [0, ly], periodic in x and y.
struct MeshConfig {
  int nx = 2;
  int ny = 2;
  double lx = 1.0;
  double ly = 1.0;

  /// Validates nx, ny >= 2 and positive extents.
  static MeshConfig make(int nx, int ny, double lx, double ly);

  [[nodiscard]] double dx() const { return lx / nx; }
  [[nodiscard]] double dy() const { return ly / ny; }
  [[nodiscard]] double aspect_ratio() const { return dx() / dy(); }
  [[nodiscard]] int num_elements() const { return nx * ny; }
};

/// Global node numbering of order-p elements on a periodic mesh. Shared edge
/// and vertex nodes are identified, giving p*nx by p*ny unique coefficients.
struct FieldLayout {
  int p = 1;
  int nx = 2;
  int ny = 2;

  [[nodiscard]] int Nx() const { return p * nx; }
  [[nodiscard]] int Ny() const { return p * ny; }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(Nx()) * Ny(); }

  /// Global x index of local node i of element column ex; i may lie outside [0, p].
  [[nodiscard]] int global_x(int ex, int i) const { return wrap(ex * p + i, Nx()); }
  [[nodiscard]] int global_y(int ey, int j) const { return wrap(ey * p + j, Ny()); }
  [[nodiscard]] std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * Nx() + ix;
  }

  bool operator==(const FieldLayout&) const = default;

  static int wrap(int i, int n) { return ((i % n) + n) % n; }
};

/// Global coefficient vector, row-major by y then x.
class Field {
 public:
  Field() = default;
  explicit Field(const FieldLayout& layout, double value = 0.0)
      : layout_(layout), values_(layout.size(), value) {}

  [[nodiscard]] const FieldLayout& layout() const { return layout_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  double& operator()(int ix, int iy) { return values_[layout_.index(ix, iy)]; }
  double operator()(int ix, int iy) const { return values_[layout_.index(ix, iy)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  void fill(double v);
  [[nodiscard]] double mean() const;
  /// Removes the constant component (Euclidean projection).
  void remove_mean();

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  FieldLayout layout_;
  std::vector<double> values_;
};

/// Local (p+1)x(p+1) coefficient block of element (ex, ey), row-major by
/// local y then local x. Throws std::out_of_range for bad element indices.
std::vector<double> gather_element(const Field& field, int ex, int ey);
void gather_element(const Field& field, int ex, int ey, std::span<double> block);

/// field += R_e^T block; shared nodes accumulate contributions of every element.
void scatter_add_element(Field& field, int ex, int ey, std::span<const double> block);

/// Physical coordinates of the global nodes of a layout.
std::vector<double> node_coordinates_x(const FieldLayout& layout, const MeshConfig& mesh,
                                       std::span<const double> gll_nodes);
std::vector<double> node_coordinates_y(const FieldLayout& layout, const MeshConfig& mesh,
                                       std::span<const double> gll_nodes);

}  // namespace semmg
