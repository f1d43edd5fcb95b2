"""Mechanical verification of the conditions behind correct staged decoding.

Each function returns a CheckReport carrying a verdict, details, and witness
data for failures, so a caller (or the command line ``verify``) can show not
just that a configuration is broken but which leader, generator, or sampled
point breaks it.

Exact checks (element arithmetic only, no sampling): leader minimality,
induced-leader minimality, the stage noise threshold, the error-control and
nearest-neighbor generator conditions, leader-graph connectivity, and the
one-factor property for canonical forms.  Geometric region checks (region
minimality, greed compatibility) quantify over fundamental regions, which we
probe with folded random samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import GroupCode, RegionProbe
from .decoding import compute_delta, compute_primitive_delta, induced_leaders
from .linalg import dist
from . import leadergraph
from .leadergraph import fmt_element


@dataclass
class CheckReport:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def to_json(self, witness_limit: int = 10) -> dict:
        return {
            "name": self.name,
            "ok": bool(self.ok),
            "details": self.details,
            "witnesses": self.witnesses[:witness_limit],
        }

    def __str__(self) -> str:
        flag = "ok" if self.ok else "FAIL"
        return f"[{flag}] {self.name}"


# -- exact leader conditions -----------------------------------------------------


def check_minimal(code: GroupCode, leaders, subgroup_elements,
                  name: str = "minimal", tau: float | None = None) -> CheckReport:
    """Each leader moves x0 strictly less than every other member of its
    coset, stabilizer excluded: ||c x0 - x0|| < ||c h x0 - x0|| for h in
    H - Stab_H(x0).  (Inverting c and ch changes neither norm.)

    Equalities within tolerance are reported as ties; they break minimality
    just as strict violations do but point at a different repair (changing
    the initial vector or the tower rather than the leader choice).
    """
    tau = code.tau if tau is None else tau
    group = code.group
    leaders = list(leaders)
    hs = [h for h in subgroup_elements if code.move(h) > tau]
    witnesses = []
    ties = 0
    for c in leaders:
        base = code.move(c)
        for h in hs:
            other = code.move(group.mul(c, h))
            gap = other - base
            if gap <= tau:
                kind = "tie" if abs(gap) <= tau else "smaller"
                witnesses.append({"leader": fmt_element(c), "h": fmt_element(h),
                                  "kind": kind, "gap": float(gap)})
                if kind == "tie":
                    ties += 1
    return CheckReport(name=name, ok=not witnesses,
                       details={"leaders": len(leaders), "ties": ties},
                       witnesses=witnesses)


def check_induced_minimal(chain, code: GroupCode,
                          tau: float | None = None) -> CheckReport:
    """Minimality of every induced transversal of G over G_k.

    This is the exact necessary-and-sufficient condition (given a full
    orbit) for the staged decoder to decode correctly.
    """
    tau = code.tau if tau is None else tau
    m = len(chain.stages)
    witnesses = []
    for k in range(1, m):
        subgroup = [h for h in chain.subgroup_elements(k)
                    if code.move(h) > tau]
        for P in induced_leaders(chain, k):
            base = code.move(P)
            for h in subgroup:
                other = code.move(chain.group.mul(P, h))
                gap = other - base
                if gap <= tau:
                    witnesses.append({
                        "level": k,
                        "leader": fmt_element(P),
                        "h": fmt_element(h),
                        "kind": "tie" if abs(gap) <= tau else "smaller",
                        "gap": float(gap),
                    })
    return CheckReport(name="induced-minimal", ok=not witnesses,
                       details={"levels": m - 1}, witnesses=witnesses)


def check_delta(chain, code: GroupCode, tau: float | None = None) -> CheckReport:
    """Positive stage margins: noise below half the reported delta decodes
    exactly through the staged decoder."""
    tau = code.tau if tau is None else tau
    report = compute_delta(chain, code.x0, code.min_distance, tau)
    return CheckReport(
        name="stage-margins",
        ok=report.delta > tau,
        details={"delta": report.delta,
                 "per_stage": {k: float(v) for k, v in report.per_stage.items()}},
    )


# -- sampled region conditions -----------------------------------------------------


def check_region_minimal(code: GroupCode, leaders, sub_elements, big_elements,
                         rng: np.random.Generator, samples: int = 50,
                         name: str = "region-minimal") -> CheckReport:
    """Sampled version of: every leader c maps the big group's fundamental
    region into c (fundamental region of the subgroup), i.e. c^{-1} y stays
    region-inside for every y in FR(K).

    One distance vector over K answers all leaders at once: both
    ||c^{-1} y - x0|| and ||h (c^{-1} y) - x0|| appear in it, because
    h c^{-1} is again a member of K.  The coset row indices are precomputed
    per leader, so each sample costs a single stacked matmul.
    """
    group = code.group
    leaders = list(leaders)
    probe = RegionProbe(code, big_elements)
    hs = [h for h in sub_elements if code.move(h) > code.tau]
    plans = []
    for c in leaders:
        ci = group.inv(c)
        rows = np.array([probe.index(group.mul(h, ci)) for h in hs], dtype=np.intp)
        plans.append((c, probe.index(ci), rows))
    witnesses = []
    for _ in range(samples):
        y = probe.sample_interior(rng)
        ds = probe.distances(y)
        for c, ci_row, rows in plans:
            margin = float(ds[rows].min() - ds[ci_row]) if len(rows) else 0.0
            if margin < -code.tau:
                witnesses.append({"leader": fmt_element(c), "margin": margin})
    return CheckReport(name=name, ok=not witnesses,
                       details={"samples": samples, "leaders": len(leaders)},
                       witnesses=witnesses)


def check_greed_compatible(code: GroupCode, leaders, sub_elements, big_elements,
                           rng: np.random.Generator, samples: int = 50,
                           name: str = "greed-compatible") -> CheckReport:
    """Sampled version of: every x in FR(H) is carried into FR(K) by at
    least one leader.

    c x lies in FR(K) exactly when c minimizes ||k x - x0|| over k in K, so
    the whole check per sample is one distance vector over K plus a lookup
    of the minimizing rows in the leader set.
    """
    leader_set = set(leaders)
    sub_probe = RegionProbe(code, sub_elements)
    big_probe = RegionProbe(code, big_elements)
    witnesses = []
    for _ in range(samples):
        x = sub_probe.sample_interior(rng)
        ds = big_probe.distances(x)
        hits = np.nonzero(ds <= ds.min() + code.tau)[0]
        if not any(big_probe.elements[i] in leader_set for i in hits):
            witnesses.append({"point_distance": float(dist(x, code.x0)),
                              "minimizers": [fmt_element(big_probe.elements[i])
                                             for i in hits[:4]]})
    return CheckReport(name=name, ok=not witnesses,
                       details={"samples": samples, "leaders": len(leader_set)},
                       witnesses=witnesses)


def check_region_greed_agreement(code: GroupCode, leaders, sub_elements,
                                 big_elements, rng: np.random.Generator,
                                 samples: int = 50) -> CheckReport:
    """With a full orbit, region minimality and greed compatibility are
    equivalent; this runs both sampled checks and compares verdicts."""
    rm = check_region_minimal(code, leaders, sub_elements, big_elements,
                              rng, samples)
    gc = check_greed_compatible(code, leaders, sub_elements, big_elements,
                                rng, samples)
    return CheckReport(name="region-greed-agreement", ok=rm.ok == gc.ok,
                       details={"region_minimal": rm.ok,
                                "greed_compatible": gc.ok})


# -- generator conditions ---------------------------------------------------------


def _with_inverses(group, xs) -> list:
    out = list(xs)
    for x in xs:
        xi = group.inv(x)
        if xi not in out:
            out.append(xi)
    return out


def check_error_control(group, leaders, gens_big, gens_sub,
                        name: str = "error-control") -> CheckReport:
    """For every b in X_K (and inverses) and leader c: either bc is again a
    leader, or the conjugate c^{-1} b c lands in X_H (or inverses).

    This is what keeps a single-generator slip from disturbing more than one
    factor of a canonical form.
    """
    leader_set = set(leaders)
    big = _with_inverses(group, list(gens_big))
    sub = set(_with_inverses(group, list(gens_sub)))
    witnesses = []
    for b in big:
        for c in leaders:
            bc = group.mul(b, c)
            if bc in leader_set:
                continue
            conj = group.mul(group.mul(group.inv(c), b), c)
            if conj in sub:
                continue
            witnesses.append({"b": fmt_element(b), "leader": fmt_element(c)})
    return CheckReport(name=name, ok=not witnesses,
                       details={"generators": len(big), "leaders": len(leader_set)},
                       witnesses=witnesses)


def check_nearest_neighbors(code: GroupCode, gens,
                            name: str = "nearest-neighbors") -> CheckReport:
    """The elements realizing the minimum move all lie in the generating set
    or its inverses."""
    group = code.group
    allowed = set(_with_inverses(group, list(gens)))
    neighbors = code.nearest_neighbors()
    outside = [g for g in neighbors if g not in allowed]
    return CheckReport(name=name, ok=not outside,
                       details={"neighbors": len(neighbors),
                                "min_distance": code.min_distance},
                       witnesses=[fmt_element(g) for g in outside])


def check_one_factor_error(chain, gens, elements=None, rng=None,
                           samples: int = 200) -> CheckReport:
    """A generator slip changes one canonical factor, to an adjacent one.

    For each probed g and each b in the generating set (and inverses), the
    canonical forms of g and b g must agree in all stages but at most one,
    and the two leaders at a differing stage must be adjacent in that
    stage's leader graph.  Probes all of ``elements`` when given, otherwise
    ``samples`` random elements.
    """
    group = chain.group
    big = _with_inverses(group, list(gens))
    graphs = [leadergraph.build(group, stage.leaders, stage.generators)
              for stage in chain.stages]
    if elements is None:
        elements = (group.random_element(rng) for _ in range(samples))
    witnesses = []
    probed = 0
    for g in elements:
        probed += 1
        form = chain.factorize(g)
        for b in big:
            other = chain.factorize(group.mul(b, g))
            diff = [i for i, (c, d) in enumerate(zip(form, other)) if c != d]
            if not diff:
                continue
            if len(diff) > 1:
                witnesses.append({"g": fmt_element(g), "b": fmt_element(b),
                                  "stages": [i + 1 for i in diff]})
                continue
            i = diff[0]
            if not graphs[i].adjacent(form[i], other[i]):
                witnesses.append({"g": fmt_element(g), "b": fmt_element(b),
                                  "stages": [i + 1], "kind": "not-adjacent"})
    return CheckReport(name="one-factor-error", ok=not witnesses,
                       details={"probed": probed, "generators": len(big)},
                       witnesses=witnesses)


def check_dagger(code: GroupCode, steps, name: str = "improving-steps") -> CheckReport:
    """Every codeword other than x0 admits a strictly improving step.

    Reports the walker's threshold; a nonpositive value comes with a stuck
    codeword as witness.
    """
    steps = list(steps)
    report = compute_primitive_delta(code, steps)
    witnesses = []
    if report.witness_index is not None:
        witnesses.append({"orbit_index": report.witness_index})
    return CheckReport(name=name, ok=report.delta > code.tau,
                       details={"delta": float(report.delta), "steps": len(steps)},
                       witnesses=witnesses)


def check_connected(group, leaders, gens, name: str = "leader-graph-connected"
                    ) -> CheckReport:
    graph = leadergraph.build(group, leaders, gens)
    return CheckReport(name=name, ok=graph.is_connected(),
                       details={"vertices": len(list(leaders)),
                                "shape": graph.shape()})


# -- bundles ----------------------------------------------------------------------


def run_standard_checks(chain, code: GroupCode, rng: np.random.Generator | None = None,
                        region_samples: int = 0) -> list[CheckReport]:
    """The battery used by the command line: exact checks always, sampled
    region checks when region_samples > 0."""
    reports = [
        CheckReport(name="full-orbit", ok=code.stabilizer_trivial,
                    details={"stabilizer_size": code.stabilizer_size}),
    ]
    for stage in chain.stages:
        sub = list(chain.subgroup_elements(stage.level - 1))
        reports.append(check_minimal(
            code, stage.leaders, sub, name=f"minimal[{stage.name}]"))
        if stage.generators:
            reports.append(check_connected(
                chain.group, stage.leaders, stage.generators,
                name=f"leader-graph-connected[{stage.name}]"))
    reports.append(check_induced_minimal(chain, code))
    reports.append(check_delta(chain, code))
    for i in range(1, len(chain.stages)):
        below, here = chain.stages[i - 1], chain.stages[i]
        if below.generators and here.generators:
            reports.append(check_error_control(
                chain.group, here.leaders, here.generators, below.generators,
                name=f"error-control[{here.name}]"))
    top = chain.stages[-1]
    if top.generators:
        reports.append(check_nearest_neighbors(code, top.generators))
    if region_samples > 0 and rng is not None:
        for stage in chain.stages:
            sub = list(chain.subgroup_elements(stage.level - 1))
            big = list(chain.subgroup_elements(stage.level))
            reports.append(check_region_minimal(
                code, stage.leaders, sub, big, rng, region_samples,
                name=f"region-minimal[{stage.name}]"))
            reports.append(check_greed_compatible(
                code, stage.leaders, sub, big, rng, region_samples,
                name=f"greed-compatible[{stage.name}]"))
    return reports
