"""Hamiltonian systems, first integrals and verification suites for the
three-body inverse-square model and its axially symmetric family."""

from ._core import (  # noqa: F401
    AngularProfile,
    ConfigError,
    HamiltonianSystem,
    IntegralSet,
    Observable,
    SingularityError,
    __version__,
    calogero_profile,
    calogero_reduced_2d,
    calogero_three_body,
    catalog_coordinate_planes,
    catalog_rotational,
    chart_inverse,
    chart_map,
    closure_probe,
    conservation_report,
    integrate,
    jacobi_transform,
    linear_connection_residual,
    numerical_rank,
    poisson_bracket,
    preset_names,
    rotation_tr,
    rotational_family,
    run_preset,
)
