"""Unit conversions applied at the I/O boundary only."""

import math


def db_to_linear(x_db):
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x):
    if x <= 0:
        return -math.inf
    return 10.0 * math.log10(x)


def ms_to_s(t_ms):
    return t_ms * 1e-3
