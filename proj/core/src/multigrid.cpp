#include "semmg/multigrid.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

#include "semmg/krylov.hpp"

namespace semmg {

int OverlapRule::evaluate(int p_level) const {
  int n = 0;
  switch (kind) {
    case Kind::fixed: n = layers; break;
    case Kind::floor_p_over_8: n = p_level / 8; break;
    case Kind::ceil_p_over_8: n = (p_level + 7) / 8; break;
    case Kind::ceil_p_over_2: n = (p_level + 1) / 2; break;
  }
  return std::clamp(n, 0, std::max(p_level - 1, 0));
}

std::string OverlapRule::to_string() const {
  switch (kind) {
    case Kind::fixed: return "fixed:" + std::to_string(layers);
    case Kind::floor_p_over_8: return "floorp8";
    case Kind::ceil_p_over_8: return "ceilp8";
    case Kind::ceil_p_over_2: return "ceilp2";
  }
  return "?";
}

OverlapRule OverlapRule::parse(std::string_view text) {
  if (text == "floorp8") return floor_p8();
  if (text == "ceilp8") return ceil_p8();
  if (text == "ceilp2") return ceil_p2();
  constexpr std::string_view prefix = "fixed:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    int k = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 0) return fixed(k);
  }
  throw std::invalid_argument("unknown overlap rule '" + std::string(text) + "'");
}

std::string_view to_string(CycleType type) {
  return type == CycleType::standard ? "std" : "var";
}

struct MultigridHierarchy::Level {
  int p = 1;
  Basis1D basis;
  FieldLayout layout;
  std::unique_ptr<Operator> op;
  std::unique_ptr<SchwarzSmoother> smoother;
  Interp1D interp;  // from level - 1
  int overlap = 0;
  int n_pre = 0;
  int n_post = 0;
  Field u, f, r;
};

MultigridHierarchy::MultigridHierarchy(const MeshConfig& mesh, const MultigridOptions& options)
    : mesh_(mesh), options_(options) {
  const int p = options.order;
  if (p < 2 || !std::has_single_bit(static_cast<unsigned>(p)))
    throw std::invalid_argument("MultigridHierarchy: order must be a power of two >= 2, got " +
                                std::to_string(p));
  if (options.n_pre < 0 || options.n_post < 0)
    throw std::invalid_argument("MultigridHierarchy: smoothing steps must be non-negative");
  const int L = std::countr_zero(static_cast<unsigned>(p));

  for (int l = 0; l <= L; ++l) {
    auto level = std::make_unique<Level>();
    level->p = 1 << l;
    level->basis = gll_basis(level->p);
    level->layout = FieldLayout{level->p, mesh.nx, mesh.ny};

    std::vector<double> local_scale;
    if (options.diffusivity) {
      Field nu = sample_field(level->layout, mesh, level->basis, *options.diffusivity);
      auto op = std::make_unique<DiffusionOperator>(level->basis, mesh, std::move(nu));
      local_scale = inverse_mean_diffusivity(*op);
      level->op = std::move(op);
    } else {
      level->op = std::make_unique<PoissonOperator>(level->basis, mesh);
    }

    if (l >= 1) {
      level->interp = interp_matrix(levels_.back()->basis, level->basis);
      level->overlap = options.overlap.evaluate(level->p);
      const int factor = options.cycle == CycleType::variable ? (1 << (L - l)) : 1;
      level->n_pre = options.n_pre * factor;
      level->n_post = options.n_post * factor;
      level->smoother = std::make_unique<SchwarzSmoother>(*level->op, mesh, level->basis,
                                                          level->overlap, options.smoother,
                                                          std::move(local_scale));
    }
    level->u = Field(level->layout);
    level->f = Field(level->layout);
    level->r = Field(level->layout);
    levels_.push_back(std::move(level));
  }
}

MultigridHierarchy::~MultigridHierarchy() = default;

namespace {
void check_level(int level, int num_levels, int lowest) {
  if (level < lowest || level >= num_levels)
    throw std::out_of_range("multigrid level " + std::to_string(level) + " out of range");
}
}  // namespace

int MultigridHierarchy::order(int level) const {
  check_level(level, num_levels(), 0);
  return levels_[level]->p;
}
int MultigridHierarchy::overlap(int level) const {
  check_level(level, num_levels(), 0);
  return levels_[level]->overlap;
}
int MultigridHierarchy::pre_steps(int level) const {
  check_level(level, num_levels(), 0);
  return levels_[level]->n_pre;
}
int MultigridHierarchy::post_steps(int level) const {
  check_level(level, num_levels(), 0);
  return levels_[level]->n_post;
}
const FieldLayout& MultigridHierarchy::layout(int level) const {
  check_level(level, num_levels(), 0);
  return levels_[level]->layout;
}
const Basis1D& MultigridHierarchy::basis(int level) const {
  check_level(level, num_levels(), 0);
  return levels_[level]->basis;
}
const Operator& MultigridHierarchy::op(int level) const {
  check_level(level, num_levels(), 0);
  return *levels_[level]->op;
}
SchwarzSmoother* MultigridHierarchy::smoother(int level) {
  check_level(level, num_levels(), 0);
  return levels_[level]->smoother.get();
}
const Interp1D& MultigridHierarchy::interpolation(int level) const {
  check_level(level, num_levels(), 1);
  return levels_[level]->interp;
}

Field MultigridHierarchy::prolongate(int level, const Field& coarse) const {
  check_level(level, num_levels(), 1);
  const auto& fine_layout = levels_[level]->layout;
  const auto& coarse_layout = levels_[level - 1]->layout;
  if (!(coarse.layout() == coarse_layout)) throw std::invalid_argument("prolongate: layout mismatch");
  const auto& J = levels_[level]->interp.matrix;
  const int pf = fine_layout.p;
  const int pc = coarse_layout.p;

  // x direction: coarse rows, fine columns
  const int nxf = fine_layout.Nx();
  const int nyc = coarse_layout.Ny();
  std::vector<double> tmp(static_cast<std::size_t>(nxf) * nyc, 0.0);
  for (int iy = 0; iy < nyc; ++iy)
    for (int ex = 0; ex < mesh_.nx; ++ex)
      for (int i = 0; i < pf; ++i) {
        double s = 0.0;
        for (int j = 0; j <= pc; ++j) s += J(i, j) * coarse(coarse_layout.global_x(ex, j), iy);
        tmp[static_cast<std::size_t>(iy) * nxf + ex * pf + i] = s;
      }

  Field fine(fine_layout);
  for (int ey = 0; ey < mesh_.ny; ++ey)
    for (int i = 0; i < pf; ++i)
      for (int j = 0; j <= pc; ++j) {
        const double w = J(i, j);
        const std::size_t src = static_cast<std::size_t>(coarse_layout.global_y(ey, j)) * nxf;
        for (int ix = 0; ix < nxf; ++ix) fine(ix, ey * pf + i) += w * tmp[src + ix];
      }
  return fine;
}

Field MultigridHierarchy::restrict_residual(int level, const Field& fine) const {
  check_level(level, num_levels(), 1);
  const auto& fine_layout = levels_[level]->layout;
  const auto& coarse_layout = levels_[level - 1]->layout;
  if (!(fine.layout() == fine_layout)) throw std::invalid_argument("restrict_residual: layout mismatch");
  const auto& J = levels_[level]->interp.matrix;
  const int pf = fine_layout.p;
  const int pc = coarse_layout.p;

  // transpose of the y pass
  const int nxf = fine_layout.Nx();
  const int nyc = coarse_layout.Ny();
  std::vector<double> tmp(static_cast<std::size_t>(nxf) * nyc, 0.0);
  for (int ey = 0; ey < mesh_.ny; ++ey)
    for (int i = 0; i < pf; ++i)
      for (int j = 0; j <= pc; ++j) {
        const double w = J(i, j);
        const std::size_t dst = static_cast<std::size_t>(coarse_layout.global_y(ey, j)) * nxf;
        for (int ix = 0; ix < nxf; ++ix) tmp[dst + ix] += w * fine(ix, ey * pf + i);
      }

  // transpose of the x pass
  Field coarse(coarse_layout);
  for (int iy = 0; iy < nyc; ++iy)
    for (int ex = 0; ex < mesh_.nx; ++ex)
      for (int i = 0; i < pf; ++i) {
        const double v = tmp[static_cast<std::size_t>(iy) * nxf + ex * pf + i];
        for (int j = 0; j <= pc; ++j) coarse(coarse_layout.global_x(ex, j), iy) += J(i, j) * v;
      }
  return coarse;
}

Field MultigridHierarchy::coarse_solve(const Field& f0) {
  Field rhs = f0;
  rhs.remove_mean();
  Field u(levels_[0]->layout);
  const int cap = 10 * static_cast<int>(u.size());
  const auto res = conjugate_gradient(*levels_[0]->op, rhs, u, options_.coarse_tolerance, cap);
  coarse_info_ = {res.iterations, res.relative_residual, res.converged};
  if (!res.converged) ++coarse_failures_;
  u.remove_mean();
  return u;
}

void MultigridHierarchy::v_cycle(Field& u, const Field& f) {
  const int L = top();
  if (!(u.layout() == levels_[L]->layout) || !(f.layout() == levels_[L]->layout))
    throw std::invalid_argument("v_cycle: fields do not match the top level");

  auto U = [&](int l) -> Field& { return l == L ? u : levels_[l]->u; };
  auto F = [&](int l) -> const Field& { return l == L ? f : levels_[l]->f; };

  for (int l = L; l >= 1; --l) {
    auto& lev = *levels_[l];
    if (l < L) U(l).fill(0.0);
    lev.smoother->smooth(U(l), F(l), lev.n_pre);
    residual(*lev.op, U(l), F(l), lev.r);
    levels_[l - 1]->f = restrict_residual(l, lev.r);
  }
  levels_[0]->u = coarse_solve(levels_[0]->f);
  for (int l = 1; l <= L; ++l) {
    auto& lev = *levels_[l];
    U(l) += prolongate(l, U(l - 1));
    lev.smoother->smooth(U(l), F(l), lev.n_post);
  }
}

Field MultigridHierarchy::v_cycle(const Field& u, const Field& f) {
  Field out = u;
  v_cycle(out, f);
  return out;
}

}  // namespace semmg
