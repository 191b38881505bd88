#include "cutopt/optimize/sensitivities.hpp"

#include <algorithm>
#include <stdexcept>

namespace cutopt {

double volume_target(int i, const DensityModel& model) {
  const double ramp = model.ramp_iters > 0 ? std::max(0.0, 1.0 - static_cast<double>(i) / model.ramp_iters) : 0.0;
  return model.delta_vol + (1.0 - model.delta_vol) * ramp;
}

Eigen::VectorXd energy_derivatives(const Discretization& disc, const Eigen::VectorXd& u, const Eigen::VectorXd& chi) {
  const auto& cells = disc.cells();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<int>(cells.size()));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const DensityCell& dc = cells[c];
    Eigen::VectorXd ue(dc.eqs.size());
    for (std::size_t r = 0; r < dc.eqs.size(); ++r) ue[r] = u[dc.eqs[r]];
    d[c] = 2.0 * dc.f.dot(ue) - ue.dot(dc.K * ue);
  }
  const double beta = disc.definition().nitsche.beta;
  for (const TracePoint& tp : disc.traces()) {
    if (tp.kind == TagKind::Neumann) {
      const TraceSideData& sd = tp.side[0];
      double gu = 0.0;
      for (std::size_t a = 0; a < sd.N.size(); ++a)
        gu += sd.N[a] * (tp.traction.x() * u[sd.eqs[2 * a]] + tp.traction.y() * u[sd.eqs[2 * a + 1]]);
      d[sd.cell] += 2.0 * tp.weight * gu;
      continue;
    }
    if (tp.kind != TagKind::Dirichlet && tp.kind != TagKind::Interface) continue;
    const TraceState st = trace_state(tp, u);
    const double ci = chi[tp.side[0].cell];
    if (!tp.two_sided()) {
      d[tp.side[0].cell] -= nitsche_energy<Dual>(tp, st, Dual(ci, 1.0), Dual(0.0), beta).d;
      continue;
    }
    const double cj = chi[tp.side[1].cell];
    d[tp.side[0].cell] -= nitsche_energy<Dual>(tp, st, Dual(ci, 1.0), Dual(cj, 0.0), beta).d;
    d[tp.side[1].cell] -= nitsche_energy<Dual>(tp, st, Dual(ci, 0.0), Dual(cj, 1.0), beta).d;
  }
  return d;
}

Sensitivities compute_sensitivities(const Discretization& disc, const DisplacementField& u, const Eigen::VectorXd& rho) {
  if (u.revision != disc.revision())
    throw std::logic_error("displacement is stale: the system was reassembled after it was solved");
  const DensityModel& model = disc.definition().density;
  const Eigen::VectorXd chi = disc.chi_from_design(rho);
  Sensitivities s;
  s.dpi = energy_derivatives(disc, u.u, chi);
  const int nd = disc.num_design_cells();
  const double d_one = dchi_drho(1.0, model);
  for (int c = 0; c < s.dpi.size(); ++c) s.dpi[c] *= c < nd ? dchi_drho(rho[c], model) : d_one;
  s.dlambda.resize(nd);
  for (int c = 0; c < nd; ++c) s.dlambda[c] = dchi_drho(rho[c], model) * disc.cells()[c].volume;
  return s;
}

}  // namespace cutopt
