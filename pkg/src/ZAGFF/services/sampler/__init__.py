"""
Exact sampling of the zero-average Gaussian free field.

Exports:
    TorusField, sample_field, sample_batch, iter_batch: spectral sampler
    SeedPolicy, make_generator: reproducible per-replicate streams
    dense_sample_oracle, covariance_factor: dense reference sampler
    write_field_binary, read_field_binary, write_field_csv, read_field_csv: field I/O
    empirical_covariance, stack_fields: moment checks

Example:
    from ZAGFF.services.lattice import FieldConfig
    from ZAGFF.services.sampler import SeedPolicy, sample_field

    cfg = FieldConfig(d=3, n=8)
    field = sample_field(cfg, SeedPolicy(master_seed=7).stream_seed(0))
"""

from .io import field_frame, read_field_binary, read_field_csv, write_field_binary, write_field_csv
from .moments import empirical_covariance, stack_fields
from .oracle import covariance_factor, dense_sample_oracle
from .seeds import SeedPolicy, make_generator, splitmix64
from .spectral import ModeLayout, TorusField, iter_batch, mode_layout, sample_batch, sample_field

__all__ = [
    "ModeLayout",
    "SeedPolicy",
    "TorusField",
    "covariance_factor",
    "dense_sample_oracle",
    "empirical_covariance",
    "field_frame",
    "iter_batch",
    "make_generator",
    "mode_layout",
    "read_field_binary",
    "read_field_csv",
    "sample_batch",
    "sample_field",
    "splitmix64",
    "stack_fields",
    "write_field_binary",
    "write_field_csv",
]
