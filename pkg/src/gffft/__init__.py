"""Discrete Fourier transforms over GF(2^l) via cyclotomic and composite FFTs."""
