"""Shared helpers for stepping the series engine by hand."""

import math

from kdist.series import (
    Chain,
    ChainState,
    MixtureSeries,
    SeriesState,
    _add_term,
    _advance,
    _roundoff_bracket,
)


def point_mass(h):
    return MixtureSeries(
        chains=(Chain(start=0, weight=1.0, term=h, increment=0.0),),
        weight_ratio=lambda j: 0.0,
        increment_ratio=lambda j: 0.0,
        term_at_zero=h,
    )


def start_state(series):
    state = SeriesState(chains=[ChainState.seed(c) for c in series.chains])
    for cs in state.chains:
        _add_term(state, series, cs.chain.start, cs.chain.weight, cs.chain.term)
    return state


def walk(series, steps):
    """Yield the state after offsets 0..steps, with the round-off bracket updated."""
    state = start_state(series)
    state.roundoff_bracket.add(_roundoff_bracket(state))
    yield state
    for _ in range(steps):
        _advance(state, series, backward=True)
        state.roundoff_bracket.add(_roundoff_bracket(state))
        yield state


def snapshot(state):
    return [dict(g_fwd=cs.g_fwd, h_fwd=cs.h_fwd, d_fwd=cs.d_fwd,
                 g_bwd=cs.g_bwd, h_bwd=cs.h_bwd, d_bwd=cs.d_bwd,
                 backward_added=cs.backward_added) for cs in state.chains]


def naive_bracket(history):
    # closed-form round-off bracket from recorded g, H, d per chain
    parts = []
    for c in range(len(history[0])):
        k_h = history[0][c]["h_fwd"]
        n = len(history) - 1
        d_fwd = [history[i][c]["d_fwd"] for i in range(n + 1)]
        for j in range(n + 1):
            g = history[j][c]["g_fwd"]
            parts.append(2 * k_h * g)
            if j >= 1:
                parts.append(j * g * history[j][c]["h_fwd"])
                parts.append(g * math.fsum(i * d_fwd[i] for i in range(j)))
        d_bwd = {}
        for j in range(1, n + 1):
            snap = history[j][c]
            if not snap["backward_added"]:
                continue
            d_bwd[j] = snap["d_bwd"]
            g = snap["g_bwd"]
            parts.append(2 * g * snap["h_bwd"] + j * g * snap["h_bwd"])
            parts.append(g * math.fsum(i * d_bwd[i] for i in range(1, j + 1)))
    return math.fsum(parts)
