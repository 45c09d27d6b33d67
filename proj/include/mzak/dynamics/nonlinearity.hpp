#pragma once

#include "mzak/dynamics/state.hpp"

namespace mzak {

struct NonlinearityOptions {
  bool dealias = true;
};

/// N_S = (1/i) grad(phi) . perp_grad(chi) in 2D, (1/i) (grad(phi) x grad(chi)) . e in
/// 3D. chi must be real; its imaginary part is discarded. Spectral, mean zero,
/// dealiased when requested.
Fieldd schrodinger_nonlinearity(const Fieldd& phi, const Fieldd& chi, const Geometry& geometry,
                                NonlinearityOptions options = {});

/// N_W = (1/i) Laplacian(grad(conj phi) . perp_grad(phi)) in 2D and the cross-product
/// analogue in 3D. The result is the spectrum of a real function.
Fieldd wave_nonlinearity(const Fieldd& phi, const Geometry& geometry,
                         NonlinearityOptions options = {});

/// The real density F = (1/i) grad(conj phi) (x) grad(phi) whose Laplacian is N_W.
/// Physical representation, imaginary part kept so callers can audit it.
Fieldd wave_density(const Fieldd& phi, const Geometry& geometry);

/// Both nonlinearities from one set of phi derivatives.
struct NonlinearTerms {
  Fieldd schrodinger;
  Fieldd wave;
};
NonlinearTerms nonlinear_terms(const Fieldd& phi, const Fieldd& chi, const Geometry& geometry,
                               NonlinearityOptions options = {});

}  // namespace mzak
