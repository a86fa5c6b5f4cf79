"""Wave attenuation, dispersion and Green's functions for viscoelastic
media with completely monotonic relaxation moduli, parameterized by the
dispersion-attenuation spectral measure."""

from .measures import (
    ColeCole,
    ColeDavidson,
    FiniteBand,
    HavriliakNegami,
    PowerLawMeasure,
    SpectralMeasure,
    StandardLinearSolid,
    make_finiteband_measure,
    make_powerlaw_measure,
    measure_D_constant,
    spectral_measure,
    zero_measure,
)
from .wavenumber import (
    MeasureMedium,
    branch_cut_density,
    complex_modulus,
    dispersion_attenuation,
    wave_number,
)
from .dispersion import DispersionCurve, attenuation, curve, dispersion, phase_speed

__version__ = "0.1.0"
