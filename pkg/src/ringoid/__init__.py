"""Exact computations with small additive categories given by generators and relations."""

__version__ = "0.1.0"

from .addcat import AddCat, AddFunctor, MatMorphism, validate_category
from .complexes import BoundedComplex, ChainMap, kb_hom, weight_complex
from .fileformat import ParseError, parse_presentation, parse_text, serialize
from .ideals import (Ideal, check_exact_sequence, check_nilpotent_extension, kernel_ideal,
                     nilpotence_certificate, quotient_category)
from .karoubi import equivalence_up_to_idempotents, karoubi_envelope
from .kzero import k0_compare, k0_enumeration, k0_radical_oracle
from .sqzero import Bimodule, build_square_zero
from .zlin import FpAbGroup, IntMatrix, smith_normal_form

__all__ = [
    "AddCat", "AddFunctor", "Bimodule", "BoundedComplex", "ChainMap", "FpAbGroup", "Ideal", "IntMatrix",
    "MatMorphism", "ParseError", "build_square_zero", "check_exact_sequence", "check_nilpotent_extension",
    "equivalence_up_to_idempotents", "k0_compare", "k0_enumeration", "k0_radical_oracle", "karoubi_envelope",
    "kb_hom", "kernel_ideal", "nilpotence_certificate", "parse_presentation", "parse_text", "quotient_category",
    "serialize", "smith_normal_form", "validate_category", "weight_complex",
]
