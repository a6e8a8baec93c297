from .factory import (
    shuffle,
    phase_randomize,
    make_surrogate,
    surrogate_batch,
    sign_magnitude_surrogates,
)

__all__ = [
    "shuffle",
    "phase_randomize",
    "make_surrogate",
    "surrogate_batch",
    "sign_magnitude_surrogates",
]
