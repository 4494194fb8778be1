#pragma once

namespace wavipm {

/// Order-m polynomial smoothstep on [0,1]: S(0)=0, S(1)=1, derivatives
/// 1..m-1 vanish at both ends. m=1 is the identity, m=2 the classic
/// 3u^2-2u^3.
double smoothstep(double u, int m);

/// Plateau bump on [0,1]: product of opposed smoothsteps, identically 1 on
/// [1/4,3/4], vanishing with its first m-1 derivatives at 0 and 1. Throws
/// std::domain_error outside [0,1].
double bump_lambda(double x, int m);

}  // namespace wavipm
