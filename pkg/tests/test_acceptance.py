"""The twelve acceptance criteria.  Each test records one PASS/FAIL line,
printed together at the end of the run."""

import functools
import itertools
import json
import time
from collections import defaultdict
from pathlib import Path

import jsonschema
import pytest

from preordgrp.carriers import BlockMorphism
from preordgrp.category import kernel_pair, pullback
from preordgrp.cli import parse_model, print_model, run_command
from preordgrp.cli.main import census
from preordgrp.cli.report import REPORT_SCHEMA, exit_code
from preordgrp.corpus import admissibility_instances, block_corpus, builtin_catalog, finite_corpus
from preordgrp.galois import (
    admissibility_spot_check,
    condition_star,
    gammagrp_trivial_check,
    homogeneous_split_epi_check,
    is_central_extension,
    is_gammac_normal,
    is_normal_extension,
    is_special_homogeneous,
    is_trivial_extension,
    kernel_in_center,
    kernel_pair_split_epi,
)
from preordgrp.normlattice import check_modular, enumerate_normal_subobjects
from preordgrp.reflectors import _sum_map, completion_agreement, is_abelian_object, is_commutative_object

ACCEPTANCE_RESULTS = {}
GOLDEN = Path(__file__).parent / "golden"


def criterion(n, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as e:
                ACCEPTANCE_RESULTS[n] = (title, False, f"{type(e).__name__}: {e}".splitlines()[0][:120])
                raise
            ACCEPTANCE_RESULTS[n] = (title, True, detail or "")

        return wrapper

    return deco


@pytest.fixture(scope="module")
def corpus():
    cat = builtin_catalog()
    catalog_epis = [m for m in cat.morphisms.values() if m.flags["regular_epi"]]
    return finite_corpus(12) + block_corpus(6) + catalog_epis


def definite_agreement(ms, first, second):
    agree = disagree = 0
    for m in ms:
        a, b = first(m), second(m)
        if a.definite and b.definite:
            if a.status == b.status:
                agree += 1
            else:
                disagree += 1
    return agree, disagree


@criterion(1, "central extension <=> Gamma-normal")
def test_c01_main_theorem(corpus):
    t = time.perf_counter()
    ms = finite_corpus(12) + block_corpus(6)
    nblock = sum(1 for m in ms if m.domain.group.rank > 0)
    assert len(ms) >= 200 and nblock >= 30
    agree, disagree = definite_agreement(ms, lambda m: is_central_extension(m, cross_check=False), lambda m: is_normal_extension(m, "g"))
    elapsed = time.perf_counter() - t
    assert disagree == 0
    assert elapsed <= 60
    return f"{agree} agree, 0 disagree over {len(ms)} morphisms ({nblock} block) in {elapsed:.1f}s"


@criterion(2, "Gamma_C-normal <=> kernel central and (*)")
def test_c02_gammac_theorem(corpus):
    agree, disagree = definite_agreement(corpus, is_gammac_normal, lambda m: is_normal_extension(m, "gc"))
    assert disagree == 0
    h = builtin_catalog()["heis-center-quot"]
    g = h.domain.group
    old = g.bound
    try:
        g.bound = 4
        assert kernel_in_center(h).holds
        star = condition_star(h)
        assert star.fails and star.witness == ("identity", "z", "identity")
        oracle = is_normal_extension(h, "gc")
        assert not oracle.holds
    finally:
        g.bound = old
    return f"{agree} agree; Heisenberg (i) holds, (ii) fails, oracle {oracle.status} at bound 4"


@criterion(3, "SHS criterion vs fibre oracle")
def test_c03_shs_vs_fibres():
    ms = [m for m in finite_corpus(8) if m.domain.group.rank == 0]
    assert len(ms) >= 100
    for m in ms:
        _, p, d = kernel_pair_split_epi(m)
        assert is_special_homogeneous(m).status == homogeneous_split_epi_check(p, d).status, m.name
    # bounded fibres: a lattice-criterion refutation is seen inside the box
    for m in block_corpus(6):
        if not is_special_homogeneous(m).fails:
            continue
        _, p, d = kernel_pair_split_epi(m)
        assert not homogeneous_split_epi_check(p, d, 3).holds
    return f"{len(ms)} finite-fibre instances agree"


@criterion(4, "cone-level theorem: Gamma_grp-normal <=> SHS")
def test_c04_cone_level():
    ms = [m for m in finite_corpus(8) + block_corpus(6) if m.domain.group.is_abelian]
    assert len(ms) >= 50
    for m in ms:
        pb = kernel_pair(m)
        assert gammagrp_trivial_check(pb.p1).holds == is_special_homogeneous(m).holds, m.name
    return f"{len(ms)} cone surjections agree"


@criterion(5, "Grothendieck classes biject onto differences")
def test_c05_group_completion():
    cat = builtin_catalog()
    cones = [x for x in cat.objects.values() if x.is_block and x.group.is_abelian]
    assert len(cones) >= 20
    bad = [x.name for x in cones if not completion_agreement(x, 8).holds]
    assert bad == []
    return f"{len(cones)} cones at bound 8, 0 mismatches"


@criterion(6, "modularity of normal subobjects")
def test_c06_modularity():
    cat = builtin_catalog()
    t = time.perf_counter()
    triples = 0
    for gname in ("S3", "D4", "Q8", "C12"):
        variants = [x for n, x in cat.objects.items() if n == gname or n.startswith(gname + "[")]
        for x in variants:
            subs = enumerate_normal_subobjects(x)
            for a, b, c in itertools.product(subs, repeat=3):
                if c <= a:
                    assert check_modular(a, b, c).holds
                    triples += 1
    elapsed = time.perf_counter() - t
    assert elapsed <= 10
    return f"{triples} triples, 0 violations in {elapsed:.1f}s"


@criterion(7, "commutative/abelian objects")
def test_c07_object_predicates():
    cat = builtin_catalog()
    n = 0
    for name, x in cat.objects.items():
        com = is_commutative_object(x)
        ab = is_abelian_object(x)
        if x.is_block:
            # candidate-map oracles: x + y and -x + y as morphisms X x X -> X
            assert com.holds == _sum_map(x, 1).validate().holds, name
            assert ab.holds == (com.holds and _sum_map(x, -1).validate().holds), name
        n += 1
    nat = cat["NinZ"]
    assert is_commutative_object(nat).holds and is_abelian_object(nat).fails
    return f"{n} catalog objects; (Z,N) commutative, not abelian"


def _report(tmp_path, text):
    f = tmp_path / "model.pog"
    f.write_text(text)
    return f


@criterion(8, "regression witnesses")
def test_c08_witnesses(tmp_path, capsys):
    f = _report(
        tmp_path,
        "morphism s = catalog sum\nmorphism p = catalog proj\ncheck shs s\ncheck trivial-g p\ncheck central p\n",
    )
    code = run_command(["check", str(f), "--format", "json"])
    recs = json.loads(capsys.readouterr().out)["records"]
    assert code == 1
    assert recs[0]["witness"] == ["(1,0)", "(0,1)"]
    assert recs[1]["verdict"] == "holds" and recs[2]["verdict"] == "holds"
    code = run_command(["check", str(GOLDEN / "03_heisenberg_star.pog"), "--format", "json"])
    recs = json.loads(capsys.readouterr().out)["records"]
    assert code == 1 and recs[0]["witness"] == ["identity", "z", "identity"]
    return "sum ((1,0),(0,1)); Heisenberg (identity, z, identity); projection Gamma-trivial and central"


@criterion(9, "admissibility spot-checks")
def test_c09_admissibility():
    counts = {}
    for tag in ("gc", "g"):
        insts = list(admissibility_instances(tag))
        assert len(insts) >= 50
        bad = [(b.name, phi.name) for b, phi in insts if not admissibility_spot_check(b, phi, tag).holds]
        assert bad == []
        counts[tag] = len(insts)
    return f"C: {counts['gc']} instances, F: {counts['g']} instances, 0 failures"


@criterion(10, "stability of (*) under pullback")
def test_c10_stability():
    ms = [m for m in finite_corpus(6) + block_corpus(6) if isinstance(m, BlockMorphism)]
    by_codomain = defaultdict(list)
    for m in ms:
        by_codomain[id(m.codomain)].append(m)
    squares = 0
    for group in by_codomain.values():
        for f in group:
            if not condition_star(f).holds:
                continue
            for g in group:
                assert condition_star(pullback(g, f).p1).holds, (f.name, g.name)
                squares += 1
    for m in finite_corpus(8) + block_corpus(6):
        assert condition_star(m).holds == condition_star(kernel_pair(m).p1).holds
    return f"{squares} squares; kernel-pair biconditional on the order-8 corpus"


@criterion(11, "separation: Gamma_C-normal but not Gamma-central")
def test_c11_separation():
    _, summary = census(max_order=4, block_limit=2, bound=2)
    assert summary["gammac_not_central_count"] >= 1
    assert "sum" in summary["gammac_not_central"]
    sum_map = builtin_catalog()["sum"]
    assert is_gammac_normal(sum_map).holds and not is_trivial_extension(sum_map, "g").holds
    return f"{summary['gammac_not_central_count']} separating morphisms, including sum"


@criterion(12, "CLI contract")
def test_c12_cli(capsys):
    assert run_command(["catalog", "--dump"]) == 0
    dump = capsys.readouterr().out
    assert print_model(parse_model(dump)) == dump
    cases = sorted(GOLDEN.glob("*.pog"))
    assert len(cases) == 20
    for f in cases:
        code = run_command(["check", str(f), "--format", "json"])
        out = capsys.readouterr().out
        if (GOLDEN / f"{f.stem}.err").exists():
            assert code == 3
            continue
        report = json.loads(out)
        jsonschema.validate(report, REPORT_SCHEMA)
        assert code == report["exit_code"] == exit_code(r["verdict"] for r in report["records"])
        assert report == json.loads((GOLDEN / f"{f.stem}.json").read_text())
    return "fixed point on the catalog dump; 20 golden files match"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
