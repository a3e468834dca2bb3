#pragma once

#include <vector>

#include "polaron/grid.hpp"

namespace polaron {

// sum_i integral |grad_{x_i} psi|^2.  Radial grids differentiate r*psi
// (exact for constants); Cartesian grids use differences centered at cell
// faces with periodic wrap.
double kinetic_energy(const RadialWaveFunction& psi);
double kinetic_energy(const CartesianWaveFunction& psi);

// D(rho1, rho2) = integral rho1(x) rho2(y) / |x-y|.  Radial grids use the
// two-shell Newton kernel min(1/r, 1/r'); Cartesian grids a free-space
// spectral convolution with the zero cell replaced by the equivalent-sphere
// average of 1/|x|.  Symmetric in its arguments bit-for-bit.
double coulomb_interaction(const Density& rho1, const Density& rho2);

// Electrostatic potential of rho, sampled on its own grid.
std::vector<double> coulomb_potential(const Density& rho);

// Pekar-Tomasevich energy of a product state made of normalized orbitals:
// kinetic + U * pair repulsion - alpha * D(rho, rho).
double pt_energy(const std::vector<RadialWaveFunction>& orbitals, double alpha, double repulsion_u);
double pt_energy(const std::vector<CartesianWaveFunction>& orbitals, double alpha,
                 double repulsion_u);
// Same functional evaluated on a full two-particle grid (the interparticle
// 1/|x1-x2| is summed directly with a regularized diagonal).
double pt_energy(const CartesianWaveFunction& pair_state, double alpha, double repulsion_u);

// psi_lambda(X) = lambda^{3N/2} psi(lambda X); exact on the scaled grid.
RadialWaveFunction scale_wavefunction(const RadialWaveFunction& psi, double lambda);
CartesianWaveFunction scale_wavefunction(const CartesianWaveFunction& psi, double lambda);

// Cell-averaged 1/|x| stand-in for the zero-distance cell (sphere of equal
// volume), as 1/h units: value = equivalent_sphere_constant() / h.
double equivalent_sphere_constant();

}  // namespace polaron
