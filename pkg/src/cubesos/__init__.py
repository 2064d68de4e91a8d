"""Inner and outer sum-of-squares hierarchies on the boolean and q-ary cube,
with Krawtchouk-root error bounds and explicit kernel certificates.

Submodules are imported lazily so light entry points (the constants table,
argument parsing) do not pay for scipy.
"""

__version__ = "0.1.0"

_EXPORTS = {
    "config": ["CapExceededError", "Config"],
    "cube_fourier": [
        "CubePolynomial", "FourierPolynomial", "HarmonicDecomposition",
        "MatrixPolynomial", "brute_force_min", "evaluate", "fourier_transform",
        "harmonic_parts", "inverse_fourier", "sup_norm", "translate_to_zero",
        "fwht",
    ],
    "gamma_constants": [
        "GammaTable", "build_gamma_table", "c_d", "chebyshev_coeffs", "gamma_d",
        "rho_finite", "rho_infinity", "solve_lp",
    ],
    "inner_hierarchy": [
        "InnerBoundResult", "inner_cube", "inner_cube_symmetrized",
        "inner_matrix", "inner_univariate",
    ],
    "instances": ["maxcut_instance", "random_poly", "random_matrix_poly",
                  "stable_set_instance"],
    "kernel_certifier": [
        "CertificationError", "KernelSpec", "SosCubeCertificate",
        "certified_outer_gap", "certify", "choose_kernel", "error_sweep",
        "funk_hecke_apply",
    ],
    "krawtchouk": [
        "DiscreteMeasure", "JacobiMatrix", "KrawtchoukFamily", "kraw_eval",
        "kraw_step_bound_check", "least_root", "levenshtein_phi",
        "limit_poly_eval",
    ],
    "outer_hierarchy": [
        "OuterBoundResult", "SdpProblem", "SdpSolution", "SolverError",
        "SolverOptions", "outer_cube", "outer_matrix", "solve_sdp",
        "verify_sos_certificate",
    ],
    "qary": ["QaryPolynomial", "qary_brute_min", "qary_inner_symmetrized"],
}

_ORIGIN = {name: module for module, names in _EXPORTS.items() for name in names}
__all__ = sorted(_ORIGIN)


def __getattr__(name):
    module = _ORIGIN.get(name)
    if module is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    import importlib

    value = getattr(importlib.import_module(f".{module}", __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return __all__ + ["__version__"]
