"""Command-line front end.

Exit codes: 0 pass, 1 fail (including "no homomorphism"), 2 resource-incomplete,
64 usage error.  ``OMEGALAB_THREADS`` caps internal parallelism; all current
kernels are sequential, so any positive cap is honored trivially.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .approx import (
    build_approx_map,
    carrier_check,
    diameter_bound,
    max_facet_diameter_sq,
    simplex_image_diameter_sq,
)
from .bitset import bits
from .boxcomplex import build_box, format_complex, parse_complex
from .errors import OmegalabError, ParseError, ResourceError
from .functors import omega, omega_prime, subdivide, walk_power
from .graphs import Graph, format_graph, max_degree, parse_graph
from .homology import betti_mod2, euler_characteristic
from .homsearch import HomSearchConfig, chromatic_number, format_witness, hom_exists
from .morse import ShortcutComplex, collapse, is_acyclic, removal_phases, saturation_matching
from .verify import SUITES, Budgets, canonical_json, exit_code, run_suite

USAGE_EXIT = 64
RESOURCE_EXIT = 2
FAIL_EXIT = 1


def thread_cap() -> int:
    raw = os.environ.get("OMEGALAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


@click.group()
def cli():
    """Workbench for adjoint graph functors and their box-complex claims."""


@cli.command()
@click.argument("kind", type=click.Choice(["gamma", "pi", "omega", "omega-prime"]))
@click.option("-k", "index", type=int, required=True, help="odd functor index")
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("-o", "outfile", required=True, type=click.Path())
def functor(kind, index, infile, outfile):
    """Apply a functor and write the resulting graph."""
    g = _read_graph(infile)
    if kind == "gamma":
        out = subdivide(g, index).graph
    elif kind == "pi":
        out = walk_power(g, index)
    elif kind == "omega":
        out = omega(g, index).graph
    else:
        out = omega_prime(g, index).graph
    with open(outfile, "w", encoding="utf-8") as fh:
        fh.write(format_graph(out))
    click.echo(f"{kind}_{index}: {out.n} vertices, {out.edge_count()} edges")


@cli.command()
@click.option("-g", "gpath", required=True, type=click.Path(exists=True))
@click.option("-h", "hpath", required=True, type=click.Path(exists=True))
@click.option("--witness", type=click.Path(), default=None)
@click.option("--node-budget", type=int, default=10_000_000)
def hom(gpath, hpath, witness, node_budget):
    """Decide homomorphism existence; exit 0 iff one exists."""
    g = _read_graph(gpath)
    h = _read_graph(hpath)
    found = hom_exists(g, h, HomSearchConfig(node_budget=node_budget))
    if found is None:
        click.echo("hom: none")
        sys.exit(FAIL_EXIT)
    click.echo("hom: yes")
    if witness:
        with open(witness, "w", encoding="utf-8") as fh:
            fh.write(format_witness(found))


@cli.command()
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("--node-budget", type=int, default=10_000_000)
def chromatic(infile, node_budget):
    """Chromatic number of a loopless graph."""
    g = _read_graph(infile)
    click.echo(str(chromatic_number(g, HomSearchConfig(node_budget=node_budget))))


@cli.command()
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("-o", "outfile", required=True, type=click.Path())
def box(infile, outfile):
    """Write the box complex of a graph."""
    g = _read_graph(infile)
    k = build_box(g)
    with open(outfile, "w", encoding="utf-8") as fh:
        fh.write(format_complex(k))
    click.echo(
        f"box complex: {k.token_count} vertices, {len(k.facets)} facets, "
        f"{'free' if k.free else 'not free'}"
    )


@cli.command()
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("--simplex-budget", type=int, default=10**7)
def homology(infile, simplex_budget):
    """Mod-2 Betti numbers and Euler characteristic of a complex file."""
    with open(infile, encoding="utf-8") as fh:
        k = parse_complex(fh.read())
    faces = k.simplices(simplex_budget)
    betti = betti_mod2(faces, simplex_budget)
    chi = euler_characteristic(faces)
    click.echo("betti: " + " ".join(str(b) for b in betti) + f" ; euler: {chi}")


@cli.command()
@click.option("--lemma", "which", type=click.Choice(["52", "54", "both"]), default="both")
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("-k", "half", type=int, required=True, help="half index; functor index is 2k+1")
@click.option("--certificate", type=click.Path(), default=None)
@click.option("--vertex-budget", type=int, default=10**6)
@click.option("--simplex-budget", type=int, default=10**7)
def morse(which, infile, half, certificate, vertex_budget, simplex_budget):
    """Run the collapse matchings on the shortcut complex and certify them."""
    g = _read_graph(infile)
    sc = ShortcutComplex(g, half, vertex_budget, simplex_budget)
    steps = []
    if which in ("52", "both"):
        matching, sub = saturation_matching(sc)
        acyclic = is_acyclic(matching)
        click.echo(f"saturation matching: {len(matching.pairs)} pairs, acyclic: {acyclic}")
        cert = collapse(sc.box, set(sc.simplices), sub, matching)
        click.echo(f"saturation collapse: {len(cert.steps)} steps")
        steps.extend(cert.steps)
    if which in ("54", "both"):
        current = set(sc.simplices)
        for idx, (matching, domain) in enumerate(removal_phases(sc), start=1):
            acyclic = is_acyclic(matching)
            click.echo(f"phase {idx}: {len(matching.pairs)} pairs, acyclic: {acyclic}")
            cert = collapse(sc.box, current, current - domain, matching)
            click.echo(f"phase {idx} collapse: {len(cert.steps)} steps")
            steps.extend(cert.steps)
            current -= domain
    if certificate:
        with open(certificate, "w", encoding="utf-8") as fh:
            for face, cofacet in steps:
                fh.write(
                    "x "
                    + ",".join(str(t) for t in bits(face))
                    + " "
                    + ",".join(str(t) for t in bits(cofacet))
                    + "\n"
                )


@cli.command()
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("-k", "half", type=int, required=True, help="half index; functor index is 2k+1")
@click.option("--report", "report_path", type=click.Path(), default=None)
def approx(infile, half, report_path):
    """Check the facet-image diameter bound and the carrier property."""
    g = _read_graph(infile)
    amap = build_approx_map(g, half)
    bound = diameter_bound(g, half)
    facets = []
    worst = max_facet_diameter_sq(amap)
    for f in amap.source.facets:
        facets.append(
            {
                "facet": [t for t in bits(f)],
                "diameter_sq": str(simplex_image_diameter_sq(amap, f)),
            }
        )
    ok_bound = worst < bound * bound
    ok_carrier = carrier_check(amap)
    payload = {
        "graph": {"n": g.n, "m": g.edge_count(), "max_degree": max_degree(g)},
        "half_index": half,
        "bound": str(bound),
        "bound_sq": str(bound * bound),
        "max_diameter_sq": str(worst),
        "within_bound": ok_bound,
        "carrier_ok": ok_carrier,
        "facets": facets,
    }
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    click.echo(
        f"max diameter^2 {worst} vs bound^2 {bound * bound}: "
        f"{'ok' if ok_bound else 'VIOLATED'}; carrier: {'ok' if ok_carrier else 'VIOLATED'}"
    )
    if not (ok_bound and ok_carrier):
        sys.exit(FAIL_EXIT)


@cli.command()
@click.argument("suite", type=click.Choice(list(SUITES) + ["all"]))
@click.option("--vertex-budget", type=int, default=10**6)
@click.option("--simplex-budget", type=int, default=10**7)
@click.option("--node-budget", type=int, default=10_000_000)
@click.option("-o", "outfile", type=click.Path(), default=None)
def verify(suite, vertex_budget, simplex_budget, node_budget, outfile):
    """Run a verification suite; exit 0 iff all checks pass."""
    budgets = Budgets(vertex_budget, simplex_budget, node_budget)
    report = run_suite(suite, budgets)
    for check in report["checks"]:
        click.echo(f"{check['status'].upper():8s} {check['id']}")
    click.echo(
        f"suite {suite}: {'pass' if report['passed'] else 'FAIL'}"
        + (" (incomplete)" if report["incomplete"] else "")
        + f" fingerprint {report['fingerprint'][:16]}"
    )
    if outfile:
        with open(outfile, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(report))
    sys.exit(exit_code(report))


def _detect_and_parse(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("p "):
            return "graph", parse_graph(text)
        if line.startswith("c "):
            return "complex", parse_complex(text)
        break
    raise ParseError("file is neither a graph (p line) nor a complex (c line)", 1)


@cli.command()
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
@click.option("-o", "outfile", required=True, type=click.Path())
def convert(infile, outfile):
    """Reserialize a graph or complex file in canonical form."""
    with open(infile, encoding="utf-8") as fh:
        kind, obj = _detect_and_parse(fh.read())
    text = format_graph(obj) if kind == "graph" else format_complex(obj)
    with open(outfile, "w", encoding="utf-8") as fh:
        fh.write(text)
    click.echo(f"wrote canonical {kind} file")


@cli.command()
@click.option("-i", "infile", required=True, type=click.Path(exists=True))
def show(infile):
    """Pretty-print a graph or complex file."""
    with open(infile, encoding="utf-8") as fh:
        kind, obj = _detect_and_parse(fh.read())
    if kind == "graph":
        click.echo(f"graph: {obj.n} vertices, {obj.edge_count()} edges")
        for u, v in obj.edges():
            click.echo(f"  {u} -- {v}")
        if obj.labels is not None:
            for v in range(obj.n):
                click.echo(f"  label {v}: {obj.labels[v]}")
    else:
        click.echo(
            f"complex: {obj.token_count} vertices, {len(obj.facets)} facets, "
            f"{'free' if obj.free else 'not free'}"
        )
        for t in range(obj.token_count):
            gv, shore = obj.token_name(t)
            click.echo(f"  vertex {t}: graph vertex {gv}, shore {shore}")
        for f in obj.facets:
            click.echo("  facet " + " ".join(str(t) for t in bits(f)))


def main(argv=None):
    thread_cap()  # parsed for side effect: an invalid value falls back to 1
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except (click.UsageError, click.BadParameter) as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(USAGE_EXIT)
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(FAIL_EXIT)
    except ResourceError as exc:
        click.echo(f"resource error: {exc}", err=True)
        sys.exit(RESOURCE_EXIT)
    except OmegalabError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(FAIL_EXIT)


if __name__ == "__main__":
    main()
