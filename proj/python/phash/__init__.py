"""Perceptual image hashing toolkit.

Block-DCT/PCA 640-bit perceptual hash plus a keyed two-stage spectral hash,
with the attack suite and metrics used to evaluate robustness, discrimination
and tamper detection.
"""

from ._phash import (  # noqa: F401
    BerValue,
    BitHash,
    DistributionStats,
    SpectralHash,
    SpectralParams,
    Stage2Mode,
    Verdict,
    __version__,
    apply_attack,
    ber,
    classify,
    dct2,
    decode_bytes,
    hash_image,
    hash_spectral,
    idct2,
    key_from_seed,
    load_image,
    median_of,
    pairwise_stats,
    pca_project,
    resize,
    spectral_distance,
    standardize,
    svd_truncated,
    synth_image,
    table1_suite,
    write_png,
)

__all__ = [
    "BerValue",
    "BitHash",
    "DistributionStats",
    "SpectralHash",
    "SpectralParams",
    "Stage2Mode",
    "Verdict",
    "__version__",
    "apply_attack",
    "ber",
    "classify",
    "dct2",
    "decode_bytes",
    "hash_image",
    "hash_spectral",
    "idct2",
    "key_from_seed",
    "load_image",
    "median_of",
    "pairwise_stats",
    "pca_project",
    "resize",
    "spectral_distance",
    "standardize",
    "svd_truncated",
    "synth_image",
    "table1_suite",
    "write_png",
]
