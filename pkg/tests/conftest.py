import numpy as np


def random_disk_point(rng: np.random.Generator, rmax: float = 0.95) -> complex:
    """Uniform-in-radius point of the open disk, bounded away from the rim."""
    r = rmax * rng.uniform(0.0, 1.0)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(theta), r * np.sin(theta))


def random_sector_point(rng: np.random.Generator, lo: float = 1e-4, hi: float = 1e-2):
    """Random bidisk point satisfying the cusp sector condition."""
    m2 = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    ratio = rng.uniform(0.5, 1.0)
    ph1 = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    ph2 = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    return (complex(ratio * m2**1.5 * ph1), complex(m2 * ph2))
