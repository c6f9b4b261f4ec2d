"""Published absolute-error values of other solution methods.

These columns (ultraspherical wavelet scheme, Legendre wavelet-Picard
scheme, Adomian decomposition scheme and its restarted variant) are
transcribed literature values shipped for side-by-side table output.
This package never computes them.
"""

TABLE_POINTS = (0.1, 0.3, 0.5, 0.7, 0.9)

COMPARISON_COLUMNS = {
    "example1-single": {
        "UWS": (4.0e-8, 1.2e-7, 6.1e-7, 1.6e-6, 3.3e-6),
        "LWPS": (2.1e-8, 5.2e-8, 2.8e-7, 1.4e-6, 2.5e-6),
    },
    "example1-double": {
        "UWS": (1.1e-8, 9.0e-8, 3.6e-7, 5.6e-7, 1.1e-6),
        "LWPS": (1.0e-8, 5.9e-8, 1.7e-7, 3.6e-7, 9.4e-7),
    },
    "example1-hump": {
        "UWS": (1.0e-7, 4.8e-7, 1.4e-6, 3.8e-6, 5.8e-6),
        "LWPS": (8.0e-8, 4.1e-7, 1.2e-6, 3.6e-6, 5.1e-6),
    },
    "example2": {
        "ADS": (2.4e-3, 2.2e-3, 1.5e-3, 6.2e-4, 1.4e-3),
        "RADS": (2.4e-3, 2.2e-3, 1.5e-3, 2.2e-4, 1.3e-3),
    },
}
