from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundary_kernel.errors import KernelError, ParseError, UnknownIdentifier
from boundary_kernel.syntax.ast import DefinitionCmd, InductiveCmd, SectionCmd, VariableCmd
from boundary_kernel.syntax.lexer import KEYWORDS, SYMBOLS, tokenize
from boundary_kernel.syntax.parser import parse_expr, parse_file
from boundary_kernel.syntax.printer import print_term
from boundary_kernel.syntax.resolve import Scope, resolve
from boundary_kernel.term import App, Const, Lam, Pi, Sort, SortRef, Var, syntactic_eq
from boundary_kernel.vernacular import Session, new_env


def test_lambda_resolves_to_de_bruijn():
    env = new_env("cic", prelude=False)
    assert resolve(parse_expr("fun x : Prop => x"), Scope(env)) == \
        Lam("x", SortRef(Sort("Prop")), Var(0))


def test_pi_chain_with_global_and_fresh_level():
    env = new_env("cic")
    Session(env).check_text("Record A0 : Type := i0 { X0 : Type ; R0 : X0 -> X0 -> Prop }.")
    before = set(env.graph.nodes)
    t = resolve(parse_expr("forall X : Type, (X -> X -> Prop) -> A0"), Scope(env))
    assert isinstance(t, Pi) and isinstance(t.codomain, Pi)
    assert t.codomain.codomain == Const("A0")
    assert t.domain.sort.level not in before


def test_unknown_identifier_suggests():
    env = new_env("cic")
    with pytest.raises(UnknownIdentifier, match="zork"):
        resolve(parse_expr("zork"), Scope(env))
    with pytest.raises(UnknownIdentifier, match="did you mean"):
        resolve(parse_expr("Fals"), Scope(env))


def test_unbalanced_parenthesis_position():
    with pytest.raises(ParseError) as info:
        parse_file("Definition x : Prop :=\n  (True -> False.")
    err = info.value
    assert (err.line, err.column) == (2, 17)
    assert ")" in err.expected
    with pytest.raises(ParseError) as info:
        parse_file("Definition x : Prop := True).")
    assert (info.value.line, info.value.column) == (1, 28)


def test_lexer_rejects_stray_characters():
    with pytest.raises(ParseError) as info:
        tokenize("Definition x := $")
    assert info.value.column == 17


def test_commands_parse():
    cmds = parse_file("""
-- comment
Section S.
Variables A B : Prop.
Inductive T (P : Prop) : Prop := t1 : T P | t2 : P -> T P.
Definition id (X : Prop) (x : X) : X := x.
Lemma l : True := tt Opaque.
Check id.
Normalize id True fuel 10.
End S.
""")
    kinds = [type(c).__name__ for c in cmds]
    assert kinds == ["SectionCmd", "VariableCmd", "InductiveCmd", "DefinitionCmd",
                     "DefinitionCmd", "CheckCmd", "NormalizeCmd", "EndCmd"]
    assert isinstance(cmds[0], SectionCmd) and isinstance(cmds[1], VariableCmd)
    assert cmds[1].names == ["A", "B"]
    assert isinstance(cmds[2], InductiveCmd) and [c for c, _ in cmds[2].constructors] == ["t1", "t2"]
    assert isinstance(cmds[4], DefinitionCmd) and cmds[4].opaque
    assert cmds[6].fuel == 10


def test_let_is_substituted():
    env = new_env("cic")
    t = resolve(parse_expr("fun P : Prop => let Q := P -> P in Q -> Q"), Scope(env))
    assert t == resolve(parse_expr("fun P : Prop => (P -> P) -> P -> P"), Scope(env))


def test_explicit_levels_are_shared():
    env = new_env("cic", prelude=False)
    t = resolve(parse_expr("Type@{i} -> Type@{i}"), Scope(env))
    assert t.domain == t.codomain


# -- fuzzing ----------------------------------------------------------------

VOCAB = sorted(KEYWORDS) + list(SYMBOLS) + ["x", "y", "A", "True", "f", "1", "42",
                                            "@{u}", "--c\n", "\n"]


def test_parser_fuzz_token_streams():
    rng = random.Random(1015)
    env = new_env("cic")
    parsed = 0
    for _ in range(10_000):
        n = rng.randint(1, 30)
        text = " ".join(rng.choice(VOCAB) for _ in range(n))
        if rng.random() < 0.5:
            text = rng.choice(["Definition d := ", "Check ", "Inductive I : Prop := "]) + text + " ."
        try:
            cmds = parse_file(text, "<fuzz>")
        except ParseError as exc:
            assert exc.line >= 1 and exc.column >= 1
            assert exc.render().startswith("ParseError")
            continue
        parsed += 1
        # whatever parses must be checkable without crashing the session
        report = Session(env.copy()).check_text(text, "<fuzz>")
        for o in report.outcomes:
            assert o.accepted or isinstance(o.error, KernelError)
        assert all(o.line >= 1 for o in report.outcomes) or not cmds
    assert parsed > 0


def gen_expr(rng: random.Random, depth: int, names: list[str]) -> str:
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(names + ["Prop", "Type", "True", "tt", "False"])
    x = f"v{depth}"
    choice = rng.randrange(5)
    if choice == 0:
        return f"fun ({x} : {gen_expr(rng, depth - 1, names)}) => {gen_expr(rng, depth - 1, names + [x])}"
    if choice == 1:
        return f"forall {x} : {gen_expr(rng, depth - 1, names)}, {gen_expr(rng, depth - 1, names + [x])}"
    if choice == 2:
        return f"{gen_expr(rng, depth - 1, names)} -> {gen_expr(rng, depth - 1, names)}"
    if choice == 3:
        return f"let {x} := {gen_expr(rng, depth - 1, names)} in {gen_expr(rng, depth - 1, names + [x])}"
    return f"({gen_expr(rng, depth - 1, names)}) ({gen_expr(rng, depth - 1, names)})"


def test_parser_fuzz_mutated_programs():
    """Grammatical definitions with a few tokens dropped or moved."""
    rng = random.Random(7)
    env = new_env("cic")
    outcomes = {"parsed": 0, "error": 0}
    for _ in range(2_000):
        toks = f"Definition d : {gen_expr(rng, 3, ['P'])} := {gen_expr(rng, 4, ['P'])} .".split()
        toks = ["Variable P : Prop ."] + toks
        for _ in range(rng.randint(0, 2)):
            i = rng.randrange(1, len(toks))
            op = rng.randrange(3)
            if op == 0:
                del toks[i]
            elif op == 1:
                toks.insert(i, toks[rng.randrange(1, len(toks))])
            else:
                j = rng.randrange(1, len(toks))
                toks[i], toks[j] = toks[j], toks[i]
        text = " ".join(toks)
        try:
            parse_file(text)
        except ParseError:
            outcomes["error"] += 1
            continue
        outcomes["parsed"] += 1
        report = Session(env.copy()).check_text(text)
        assert all(o.accepted or isinstance(o.error, KernelError) for o in report.outcomes)
    assert outcomes["parsed"] > 100 and outcomes["error"] > 100


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("()=>-:.,|{}@ xyAB01\nTypeProp")), max_size=40))
def test_parser_never_crashes_on_text(text):
    try:
        parse_file(text)
    except ParseError:
        pass


# -- printing ---------------------------------------------------------------

def test_printer_round_trips_simple_terms():
    env = new_env("cic")
    for text in ["forall A : Prop, A -> A",
                 "fun (A : Prop) (f : A -> A) (x : A) => f (f x)",
                 "forall (P : bool -> Prop) (b : bool), P b -> P b",
                 "fun (x : Prop) (x0 : x) => x0",
                 "forall A : Type, (A -> A -> Prop) -> Prop"]:
        t = resolve(parse_expr(text), Scope(env))
        s = print_term(t, env, universes=True)
        assert syntactic_eq(resolve(parse_expr(s), Scope(env)), t), s
        assert print_term(t, env) == text


def test_printer_avoids_capturing_constants():
    env = new_env("cic")
    # a binder hinted "True" must not shadow the constant in its body
    t = Lam("True", SortRef(Sort("Prop")), App(Var(0), Const("True")))
    s = print_term(t, env)
    assert syntactic_eq(resolve(parse_expr(s), Scope(env)), t), s


def test_printer_renders_loose_variables_with_names():
    assert print_term(App(Var(0), Var(1)), None, ["a", "b"]) == "b a"
