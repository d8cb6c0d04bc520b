from .meijer import MeijerKind, meijer_g_instance
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    gk15_panels,
    integrate_interval,
    integrate_semi_infinite,
)
from .special import (
    ln_gamma,
    log_gamma_sign,
    log_reg_lower_inc_gamma,
    lower_inc_gamma,
    reg_lower_inc_gamma,
)

__all__ = [
    "DEFAULT_CONFIG",
    "MeijerKind",
    "QuadratureConfig",
    "gk15_panels",
    "integrate_interval",
    "integrate_semi_infinite",
    "ln_gamma",
    "log_gamma_sign",
    "log_reg_lower_inc_gamma",
    "lower_inc_gamma",
    "meijer_g_instance",
    "reg_lower_inc_gamma",
]
