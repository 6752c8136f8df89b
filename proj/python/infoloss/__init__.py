"""Information loss of piecewise strictly monotone maps.

The heavy lifting lives in the compiled ``_core`` module; this package just
re-exports its public names.
"""

from ._core import (
    Density,
    PwmFunction,
    bijective_mass,
    bounds,
    branch_posterior,
    build_tight,
    cascade_loss,
    compose,
    cosine,
    cubic,
    from_polynomial,
    histogram_oracle,
    identity,
    info_loss,
    info_loss_via_w,
    magnitude,
    mc_loss,
    normal,
    output_density_at,
    piecewise_pdf,
    pushforward,
    sqlin,
    tightness_check,
    uniform,
    uniform_halfwidth,
    verify_additivity,
)

__all__ = [
    "Density",
    "PwmFunction",
    "bijective_mass",
    "bounds",
    "branch_posterior",
    "build_tight",
    "cascade_loss",
    "compose",
    "cosine",
    "cubic",
    "from_polynomial",
    "histogram_oracle",
    "identity",
    "info_loss",
    "info_loss_via_w",
    "magnitude",
    "mc_loss",
    "normal",
    "output_density_at",
    "piecewise_pdf",
    "pushforward",
    "sqlin",
    "tightness_check",
    "uniform",
    "uniform_halfwidth",
    "verify_additivity",
]

__version__ = "0.1.0"
