from __future__ import annotations

import shutil

import pytest

from boundary_kernel.corpus import (Tier, assumptions, closed_empty_inhabitants, evaluate_entry,
                                    load_corpus, parse_manifest, select)
from boundary_kernel.errors import ManifestError
from boundary_kernel.vernacular import CORPUS_ENV, corpus_dir

from conftest import run_corpus_file

ENTRIES = load_corpus()


def test_shipped_manifest_covers_the_required_files():
    labels = {e.label for e in ENTRIES}
    for need in ["prelude@cic", "logics@cic", "burali_forti@cic", "burali_forti_close@cic",
                 "burali_forti_close@type-in-type", "diaconescu@cic", "reynolds_skeleton@cic",
                 "hurkens_set@cic", "hurkens_set@cic-impredicative-set",
                 "hurkens_u_minus@system-u-minus"]:
        assert need in labels
    assert len(ENTRIES) >= 8
    assert [e.label for e in select(ENTRIES, "stretch")] == ["reynolds_full@cic"]


@pytest.mark.parametrize("entry", ENTRIES, ids=[f"{e.label}:{e.line}" for e in ENTRIES])
def test_entry_meets_its_expectations(entry):
    report = evaluate_entry(entry)
    failed = [(c.expectation.describe(), c.observed) for c in report.checks if not c.passed]
    assert report.failure is None and not failed


def test_manifest_errors(tmp_path):
    (tmp_path / "a.pdx").write_text("Definition a : Prop := True.\n")
    good = "a.pdx | cic | mandatory | a=Accepted\n"
    assert len(parse_manifest(good, tmp_path)) == 1
    bad = {
        "no such corpus file": "b.pdx | cic | mandatory | a=Accepted",
        "unknown profile": "a.pdx | coq | mandatory | a=Accepted",
        "tier must be": "a.pdx | cic | optional | a=Accepted",
        "declares no": "a.pdx | cic | mandatory | zz=Accepted",
        "expected 'path": "a.pdx | cic",
        "outcome must be": "a.pdx | cic | mandatory | a=Maybe",
        "no entries": "# nothing here",
    }
    for message, line in bad.items():
        with pytest.raises(ManifestError, match=message):
            parse_manifest(good + "\n" + line + "\n", tmp_path) if message != "no entries" \
                else parse_manifest(line, tmp_path)
    with pytest.raises(ManifestError, match=r"MANIFEST:2"):
        parse_manifest(good + "a.pdx | cic\n", tmp_path)


def test_empty_directory_is_a_manifest_error(tmp_path):
    with pytest.raises(ManifestError):
        load_corpus(tmp_path)


def test_corpus_dir_override(tmp_path, monkeypatch):
    shutil.copy(corpus_dir() / "prelude.pdx", tmp_path / "prelude.pdx")
    (tmp_path / "t.pdx").write_text("Definition t : True := tt.\n")
    (tmp_path / "MANIFEST").write_text("t.pdx | cic | mandatory | t=Accepted\n")
    monkeypatch.setenv(CORPUS_ENV, str(tmp_path))
    entries = load_corpus()
    assert [e.label for e in entries] == ["t@cic"]
    assert evaluate_entry(entries[0]).passed


def test_failed_expectation_is_reported(tmp_path):
    (tmp_path / "t.pdx").write_text("Definition t : False := tt.\n")
    entry = parse_manifest("t.pdx | cic | mandatory | t=Accepted\n", tmp_path)[0]
    report = evaluate_entry(entry)
    assert not report.passed and report.checks[0].observed == "Rejected:TypeMismatch"


def test_soundness_scan_finds_the_paradoxes():
    _, env = run_corpus_file("burali_forti_close", "type-in-type")
    assert closed_empty_inhabitants(env) == ["Paradox"]
    _, env = run_corpus_file("hurkens_u_minus", "system-u-minus")
    assert closed_empty_inhabitants(env) == ["Hurkens"]
    _, env = run_corpus_file("burali_forti_close", "cic")
    assert closed_empty_inhabitants(env) == []


def test_assumptions_are_transitive():
    _, env = run_corpus_file("hurkens_set", "cic-impredicative-set")
    assert assumptions(env, "not_EM_set") == frozenset()
    _, env = run_text_env("Axiom ax : False.\nDefinition f : False := ax.\n"
                          "Definition g : False := f.")
    assert assumptions(env, "g") == frozenset({"ax"})
    assert closed_empty_inhabitants(env) == []


def run_text_env(text):
    from conftest import run_text
    return run_text(text)


def test_discharged_statements():
    _, env = run_corpus_file("diaconescu")
    from boundary_kernel.syntax.printer import print_term
    assert print_term(env.decls["EM"].type, env) == "Tchoice -> forall P : Prop, or P (not P)"
    _, env = run_corpus_file("hurkens_set", "cic-impredicative-set")
    assert print_term(env.decls["not_EM_set"].type, env) == \
        "(forall A : Prop, sumbool A (not A)) -> False"


def test_tiers():
    assert {e.tier for e in ENTRIES} == {Tier.MANDATORY, Tier.STRETCH}
    assert len(select(ENTRIES, "all")) == len(ENTRIES)
