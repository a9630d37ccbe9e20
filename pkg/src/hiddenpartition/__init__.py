"""Toolkit for one-way communication games where a hidden partition
compresses Alice's string blockwise through a Boolean function.

Submodules:
  boolfn     truth tables, Fourier spectra, symmetric constructions
  signpoly   LP-based sign-degree and maximum-bias representations
  instances  problem instances, promise checking, serialization
  classical  sampled-bits and uniform-distribution senders
  quantum    bilinear lift, unitary dilation, Hadamard-test simulation
  reduction  parity-pair to symmetric-function instance transformation
  hardness   brute-force-verified Fourier quantities behind the lower bounds
  cli        experiment runner
"""

from .boolfn import (
    BooleanFunction,
    FourierSpectrum,
    SymmetricSpec,
    fourier_l1,
    fourier_transform,
    function_from_spec,
    make_symmetric,
    named_function,
    pure_high_degree,
    sign_changes,
)
from .instances import (
    PartitionInstance,
    PartitionParams,
    apply_permutation,
    b_map,
    generate_instance,
    verify_promise,
)
from .signpoly import SignPolynomial, best_sign_polynomial, sign_degree

__all__ = [
    "BooleanFunction",
    "FourierSpectrum",
    "SymmetricSpec",
    "PartitionInstance",
    "PartitionParams",
    "SignPolynomial",
    "apply_permutation",
    "b_map",
    "best_sign_polynomial",
    "fourier_l1",
    "fourier_transform",
    "function_from_spec",
    "generate_instance",
    "make_symmetric",
    "named_function",
    "pure_high_degree",
    "sign_changes",
    "sign_degree",
    "verify_promise",
]
