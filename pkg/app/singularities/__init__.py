"""Phase singularities of response functions in the (rho, eta) plane."""
