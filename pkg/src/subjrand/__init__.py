"""Subjective randomness ratings for binary sequences and streams built from them."""
from .bitseq import BitSeq, decode, encode, parse
from .rating import SRValue, compare, dp, dp_plus, exact_value, sr_rating

__all__ = ["BitSeq", "SRValue", "compare", "decode", "dp", "dp_plus", "encode", "exact_value",
           "parse", "sr_rating"]
__version__ = "0.1.0"
