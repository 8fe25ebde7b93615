import random
import time

import pytest

from bindforge.proxy import (NULL, AllocationLedger, ProxyState, assign, construct, format_trace,
                             owning_handles, parse_trace, random_trace, release, run_trace, OWNER_ALIAS_TRACE)


def test_owner_alias_trace_counts():
    ledger = run_trace(OWNER_ALIAS_TRACE, end_of_scope=False)
    assert (ledger.total_allocated, ledger.total_freed, ledger.double_free_events) == (2, 2, 0)
    assert ledger.leaks == 0 and ledger.use_after_free_events == 0


def test_reassigning_an_owner_frees_the_old_object():
    ledger = AllocationLedger()
    a = construct(ledger)
    owner, _ = assign(NULL, a, ledger)
    owner, _ = assign(owner, construct(ledger), ledger)
    assert ledger.total_freed == 1 and ledger.leaks == 1


def test_rvalue_is_consumed_by_assignment():
    ledger = AllocationLedger()
    lhs, rhs = assign(NULL, construct(ledger), ledger)
    assert lhs.own and not lhs.rvalue
    assert rhs == NULL


def test_alias_never_owns_and_keeps_const():
    ledger = AllocationLedger()
    owner, _ = assign(NULL, construct(ledger), ledger)
    const_view = ProxyState(owner.cptr, cnst=True)
    alias, src = assign(NULL, const_view, ledger)
    assert not alias.own and alias.cnst and src == const_view


def test_self_assignment_is_a_no_op():
    ledger = AllocationLedger()
    owner, _ = assign(NULL, construct(ledger), ledger)
    again, _ = assign(owner, owner, ledger)
    assert again == owner and ledger.total_freed == 0


def test_release_is_idempotent():
    ledger = AllocationLedger()
    owner, _ = assign(NULL, construct(ledger), ledger)
    owner = release(owner, ledger)
    owner = release(owner, ledger)
    assert owner == NULL and ledger.total_freed == 1 and ledger.double_free_events == 0


def test_null_handle_carries_no_flags():
    with pytest.raises(ValueError):
        ProxyState(None, own=True)
    assert ProxyState(3, own=True, rvalue=True, cnst=True).flags == 7


def test_trace_text_round_trip_and_errors():
    rng = random.Random(1)
    ops = random_trace(rng)
    assert parse_trace(format_trace(ops)) == ops
    with pytest.raises(ValueError):
        parse_trace("COPY a b\n")


def test_randomized_traces_are_safe():
    rng = random.Random(20190)
    start = time.perf_counter()
    for _ in range(10_000):
        ledger = run_trace(random_trace(rng, max_length=50, max_vars=8))
        assert ledger.leaks == 0
        assert ledger.double_free_events == 0
        assert ledger.use_after_free_events == 0
        assert ledger.total_allocated == ledger.total_freed
    assert time.perf_counter() - start < 5.0


def test_at_most_one_owner_per_object():
    rng = random.Random(5)
    for _ in range(500):
        ledger = AllocationLedger()
        env = {}
        for op in random_trace(rng):
            if op[0] in ("NEW", "MOVE"):
                env[op[1]], _ = assign(env.get(op[1], NULL), construct(ledger), ledger)
            elif op[0] == "ALIAS":
                env[op[1]], env[op[2]] = assign(env.get(op[1], NULL), env.get(op[2], NULL), ledger)
            else:
                env[op[1]] = release(env.get(op[1], NULL), ledger)
            assert all(count == 1 for count in owning_handles(env).values())
            assert set(owning_handles(env)) == ledger.live
