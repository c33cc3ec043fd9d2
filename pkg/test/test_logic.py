# -*- coding: utf-8 -*-

import pytest

from core.config import settings
from core.exceptions import DomainTooLargeError, MissingLiteralError
from apps.analysis.logic import (
    FF,
    TT,
    And,
    Atom,
    Chan,
    Guess,
    Iff,
    Implies,
    InVar,
    Lab,
    Not,
    Or,
    assignments,
    atoms,
    conj,
    disj,
    equivalent,
    evaluate,
    literal_key,
    neg,
    nnf,
    occurrences,
    render,
    to_prefix,
)

A, B, C = Atom(Chan("a")), Atom(Chan("b")), Atom(Chan("c"))


def test_evaluate_connectives():
    a = {Chan("a"): True, Chan("b"): False}
    assert evaluate(And((A, Not(B))), a)
    assert not evaluate(Or((Not(A), B)), a)
    assert not evaluate(Implies(A, B), a)
    assert evaluate(Iff(B, Not(A)), a)
    assert evaluate(TT, {}) and not evaluate(FF, {})


def test_evaluate_missing_literal():
    with pytest.raises(MissingLiteralError):
        evaluate(And((A, B)), {Chan("a"): True})


def test_conj_folds_constants_and_flattens():
    assert conj() == TT
    assert conj(TT, A) == A
    assert conj(A, FF, B) == FF
    assert conj(And((A, B)), C, A) == And((A, B, C))


def test_disj_folds_constants_and_flattens():
    assert disj() == FF
    assert disj(FF, A) == A
    assert disj(A, TT) == TT
    assert disj(Or((A, B)), C, B) == Or((A, B, C))


def test_neg_folds():
    assert neg(TT) == FF
    assert neg(FF) == TT
    assert neg(Not(A)) == A
    assert neg(A) == Not(A)


def test_nnf_is_equivalent():
    f = Not(Iff(Implies(A, B), Not(C)))
    g = nnf(f)
    assert equivalent(f, g)

    def only_atomic_negation(h) -> bool:
        if isinstance(h, Not):
            return isinstance(h.arg, Atom)
        if isinstance(h, (And, Or)):
            return all(only_atomic_negation(arg) for arg in h.args)
        return not isinstance(h, (Implies, Iff))

    assert only_atomic_negation(g)


def test_atoms_and_occurrences():
    f = And((A, Or((Not(A), Atom(InVar("x")))), Atom(Lab(3))))
    assert atoms(f) == {Chan("a"), InVar("x"), Lab(3)}
    assert occurrences(f) == 4


def test_assignments_enumerates_all():
    rows = list(assignments({Chan("a"), Chan("b"), Chan("c")}))
    assert len(rows) == 8
    assert len({tuple(sorted(row.items(), key=lambda kv: literal_key(kv[0]))) for row in rows}) == 8


def test_equivalent_detects_difference():
    assert equivalent(Or((A, B)), Not(And((Not(A), Not(B)))))
    assert not equivalent(Or((A, B)), And((Or((A, B)), B)))


def test_equivalent_cap():
    wide = disj(*(Atom(Chan(f"c{i}")) for i in range(settings.EQUIVALENCE_MAX_ATOMS + 1)))
    with pytest.raises(DomainTooLargeError):
        equivalent(wide, wide, cap=settings.EQUIVALENCE_MAX_ATOMS)


def test_literal_order_puts_guesses_last():
    lits = [Guess("a"), InVar("x"), Lab(10), Lab(9), Chan("b")]
    assert sorted(lits, key=literal_key) == [Chan("b"), Lab(9), Lab(10), InVar("x"), Guess("a")]


def test_prefix_form():
    f = And((A, Not(Atom(InVar("x"))), Or((Atom(Guess("c")), Atom(Lab(7))))))
    assert to_prefix(f) == "(and chan:a (not var:x) (or guess:c lab:7))"
    assert to_prefix(TT) == "true"
    assert to_prefix(Implies(A, FF)) == "(implies chan:a false)"


def test_render_infix():
    f = Or((A, And((B, Not(C)))))
    assert render(f) == "a | b & ~c"
    assert render(And((Or((A, B)), C))) == "(a | b) & c"
    assert render(Iff(Atom(Guess("a")), Atom(InVar("x")))) == "g_a <-> x:x"
