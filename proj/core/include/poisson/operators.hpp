#pragma once

// Pathwise operators on the Poisson space: divergence, Ornstein-Uhlenbeck
// generator, energy brackets and carré du champ. Everything here is a
// configuration-wise map; expectations go through a Backend.

#include <string_view>

#include "poisson/backend.hpp"
#include "poisson/functionals.hpp"
#include "poisson/ground.hpp"

namespace poisson {

enum class BracketKind { gamma, plus, minus };

std::string_view to_string(BracketKind kind) noexcept;

// δu(η) = Σ_z k_z·u(η − δ_z, z) − Σ_z λ_z·u(η, z).
//
// The η-integral evaluates u on the configuration with the integrating point
// removed. With that convention δ is the adjoint of D and E(δu)² obeys the
// Skorokhod isometry; evaluating at η itself would not.
double divergence(const RandomField& u, const GroundSpace& space, const Configuration& eta);

// LF(η) = −δ(DF)(η) = Σ_z λ_z·D⁺_zF(η) − Σ_z k_z·D⁻_zF(η).
double ou_generator(const Functional& F, const GroundSpace& space, const Configuration& eta);

// [u,v]_+ = Σ λ_z u v,  [u,v]_− = Σ k_z (u v)(η − δ_z, z),  [u,v]_Γ = average.
double bracket(const RandomField& u, const RandomField& v, BracketKind kind,
               const GroundSpace& space, const Configuration& eta);

// Γ(F,G)(η) = [DF, DG]_Γ(η).
double gamma(const Functional& F, const Functional& G, const GroundSpace& space,
             const Configuration& eta);

// ½Σ λ_z (D⁺_zF)² + ½Σ k_z (D⁻_zF)²; equals gamma(F, F, ·).
double gamma_add_drop(const Functional& F, const GroundSpace& space, const Configuration& eta);

// η ↦ Σ_z λ_z·D⁺_zF(η)·D⁺_zG(η); its expectation is the Dirichlet energy.
Functional energy_density(const Functional& F, const Functional& G, const GroundSpace& space);

// 𝓔(F,G) = E_Π Σ_z λ_z D⁺_zF D⁺_zG on the backend's space.
Expectation dirichlet_energy(const Functional& F, const Functional& G, const Backend& backend);

// (η, z) ↦ F(η)·u(η, z).
RandomField product_field(const Functional& F, const RandomField& u);

// δ(Fu) − F·δu + [DF, u]_−; identically zero.
double divergence_product_defect(const Functional& F, const RandomField& u,
                                 const GroundSpace& space, const Configuration& eta);

}  // namespace poisson
