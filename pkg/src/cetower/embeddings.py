"""Embed coordinate groups of triangular quasi-quadratic systems into towers.

An NTQ system is a base group plus levels listed outermost first.  Each level
adds variables over the group below it, in one of four forms:

* ``I``   a single quadratic equation,
* ``II``  new letters commuting with each other and with a given subgroup,
* ``III`` a free abelian factor,
* ``IV``  a free factor.

The levels are folded from the innermost one outwards.  Each step extends the
current tower by centralizer extensions and records where every variable goes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .equations import EqSystem, hom_search
from .errors import BoundExhausted, GroupTheoryError, UnsupportedCase
from .presentation import Presentation, free_group
from .quadratic import (
    COMM,
    CONJ,
    SQUARE,
    StandardQuadratic,
    classify_solution,
    euler_char,
    to_standard_form,
)
from .tower import (
    GroupHom,
    InjectivityResult,
    Tower,
    VerifyResult,
    injectivity_sample,
    tower_over,
    verify_hom,
)
from .words import Word, commutator, conjugate, enumerate_reduced_words, invert, product_of, substitute

FORMS = ("I", "II", "III", "IV")

REGULAR_MSG = (
    "needs the embedding theorem for coordinate groups of regular quadratic "
    "equations, which is not implemented"
)


def _g(s: str) -> Word:
    return Word.gen(s)


def _w(*parts) -> Word:
    return product_of(p if isinstance(p, Word) else _g(p) for p in parts)


# ----------------------------------------------------------------------
# NTQ systems
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class NtqLevel:
    """One level.  ``equation`` is used by form I, ``center_of`` and
    ``centralizer`` by form II.  Form I variables may be left empty; they are
    then inferred by the enclosing system."""

    form: str
    variables: tuple = ()
    equation: Word | None = None
    center_of: Word | None = None
    centralizer: tuple = ()

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown level form {self.form!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        if isinstance(self.equation, str):
            object.__setattr__(self, "equation", Word.parse(self.equation))
        if isinstance(self.center_of, str):
            object.__setattr__(self, "center_of", Word.parse(self.center_of))
        cz = tuple(c if isinstance(c, Word) else Word.parse(c) for c in self.centralizer)
        object.__setattr__(self, "centralizer", cz)
        if self.form == "I" and self.equation is None:
            raise ValueError("form I needs an equation")
        if self.form == "II" and self.center_of is None:
            raise ValueError("form II needs a center_of word")
        if self.form != "I" and not self.variables:
            raise ValueError(f"form {self.form} needs variables")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variables in a level")

    @classmethod
    def quadratic(cls, q: StandardQuadratic) -> "NtqLevel":
        return cls("I", q.variables + q.free_variables, q.word)

    @property
    def subgroup(self) -> tuple:
        """Form II: the generators ``U`` the new letters must commute with."""
        return self.centralizer or ((self.center_of,) if self.center_of is not None else ())

    def relators(self) -> tuple:
        xs = [_g(x) for x in self.variables]
        pairs = [commutator(xs[i], xs[j]) for i in range(len(xs)) for j in range(i + 1, len(xs))]
        if self.form == "I":
            return (self.equation,)
        if self.form == "II":
            return tuple(pairs) + tuple(commutator(x, u) for x in xs for u in self.subgroup)
        if self.form == "III":
            return tuple(pairs)
        return ()

    def constants(self) -> frozenset:
        words = [self.equation] if self.form == "I" else list(self.subgroup)
        used = frozenset().union(*(w.symbols for w in words if w is not None)) if words else frozenset()
        return used - set(self.variables)


@dataclass(frozen=True)
class NtqSystem:
    base: Presentation
    levels: tuple  # outermost first
    name: str | None = None

    def __post_init__(self):
        levels = list(self.levels)
        below = set(self.base.generators)
        for i in range(len(levels) - 1, -1, -1):
            lvl = levels[i]
            if lvl.form == "I" and not lvl.variables:
                vs = tuple(dict.fromkeys(s for s, _ in lvl.equation.letters if s not in below))
                if not vs:
                    raise ValueError(f"level {i + 1} has no variables")
                lvl = NtqLevel("I", vs, lvl.equation)
                levels[i] = lvl
            clash = set(lvl.variables) & below
            if clash:
                raise ValueError(f"level {i + 1} reuses symbols {sorted(clash)}")
            bad = lvl.constants() - below
            if bad:
                raise ValueError(f"level {i + 1} uses {sorted(bad)}, which are not in the group below it")
            below |= set(lvl.variables)
        object.__setattr__(self, "levels", tuple(levels))

    @property
    def variables(self) -> tuple:
        """All variables, innermost level first."""
        return tuple(v for lvl in reversed(self.levels) for v in lvl.variables)

    @property
    def generators(self) -> tuple:
        return tuple(self.base.generators) + self.variables

    def coordinate_presentation(self) -> Presentation:
        """``<A, X | relators of the base, level relators>`` (no radical added)."""
        rels = list(self.base.relators)
        for lvl in reversed(self.levels):
            rels.extend(lvl.relators())
        return Presentation(self.generators, rels, name=self.name, allow_unsafe=self.base.allow_unsafe)

    def coordinate_tower(self) -> Tower | None:
        """The coordinate group as a tower, when no level is quadratic.

        Free letters join the base; a free abelian block is its first letter
        plus letters over that letter's centralizer; form II letters extend
        the given centralizer.
        """
        if any(lvl.form == "I" for lvl in self.levels):
            return None
        gens = list(self.base.generators)
        level_pairs = []
        for lvl in reversed(self.levels):
            if lvl.form == "IV":
                gens.extend(lvl.variables)
            elif lvl.form == "III":
                first = lvl.variables[0]
                gens.append(first)
                level_pairs.extend((x, _g(first)) for x in lvl.variables[1:])
            else:
                level_pairs.extend((x, lvl.center_of) for x in lvl.variables)
        base = Presentation(gens, self.base.relators, allow_unsafe=self.base.allow_unsafe)
        return tower_over(base, level_pairs)


# ----------------------------------------------------------------------
# configuration and results
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class EmbedConfig:
    """``solution_radius`` bounds the solution searches of quadratic levels;
    equations in three or more variables are searched to radius at most 1.
    ``verify_radius`` > 0 runs injectivity sampling."""

    solution_radius: int = 2
    verify_radius: int = 0
    centralizer_bound: int = 2
    seed: int = 0

    def radius_for(self, nvars: int) -> int:
        return self.solution_radius if nvars <= 2 else min(self.solution_radius, 1)


@dataclass
class EmbeddingResult:
    tower: Tower
    hom: GroupHom
    case_trace: list
    verify: VerifyResult | None = None
    injectivity: InjectivityResult | None = None

    @property
    def images(self) -> dict:
        return self.hom.images


# ----------------------------------------------------------------------
# the case machine
# ----------------------------------------------------------------------


class _Builder:
    def __init__(self, tower: Tower, images: Mapping[str, Word], reserved, cfg: EmbedConfig):
        self.tower = tower
        self.images = dict(images)
        self.reserved = set(reserved)
        self.cfg = cfg
        self.trace: list = []

    # -- small helpers -------------------------------------------------
    def fresh(self, prefix: str) -> str:
        taken = set(self.tower.generators) | self.reserved
        name, i = prefix, 1
        while name in taken:
            name = f"{prefix}{i}"
            i += 1
        self.reserved.add(name)
        return name

    def extend(self, u: Word, letters: Sequence[str]):
        self.tower = self.tower.extend_centralizer(u, len(letters), list(letters))

    def mapped(self, w: Word) -> Word:
        """A word of the group below, written in the current tower."""
        return self.tower.britton_reduce(substitute(w, self.images))

    def trivial(self, w: Word) -> bool:
        return self.tower.is_trivial(w)

    def noncommuting_pair(self) -> tuple:
        for radius in (1, 2):
            ball = [w for w in enumerate_reduced_words(self.tower.generators, radius) if w]
            for i, u in enumerate(ball):
                for v in ball[i + 1 :]:
                    if not self.tower.commute(u, v):
                        return u, v
        raise GroupTheoryError("the group is abelian on short words; no non-commuting pair")

    # -- forms IV, III, II ---------------------------------------------
    def form_iv(self, variables: Sequence[str]) -> dict:
        out = {}
        vs = list(variables)
        while vs:
            pair, vs = vs[:2], vs[2:]
            u, v = self.noncommuting_pair()
            t, s, r = self.fresh("t"), self.fresh("s"), self.fresh("r")
            self.extend(u, [t])
            self.extend(v, [s])
            self.extend(_w(u, s, t), [r])
            imgs = [conjugate(_g(t), _g(r)), conjugate(_g(s), _g(r))]
            out.update(zip(pair, imgs))
            self.trace.append(
                f"IV: free letters {', '.join(pair)} via u={u}, v={v}; "
                f"{t}:C({u}), {s}:C({v}), {r}:C({u} {s} {t})"
            )
        return out

    def form_iii(self, variables: Sequence[str]) -> dict:
        vs = list(variables)
        if len(vs) == 1:
            return self.form_iv(vs)
        u, v = self.noncommuting_pair()
        t, s = self.fresh("t"), self.fresh("s")
        self.extend(u, [t])
        self.extend(v, [s])
        g = _w(u, s, t)
        x1, x2 = vs[:2]
        self.extend(g, [x1, x2])
        out = {x1: _g(x1), x2: _g(x2)}
        self.trace.append(
            f"III: substitute map, {x1}, {x2} extend C({g}) over {t}:C({u}), {s}:C({v}); "
            "injectivity checked by sampling"
        )
        if len(vs) > 2:
            out.update(self._extend_by(_g(x1), vs[2:], "III (rest)"))
        return out

    def _extend_by(self, g: Word, letters: Sequence[str], label: str) -> dict:
        cent = self.tower.centralizer(self.tower.britton_reduce(g))
        self.extend(g, letters)
        gens = ", ".join(map(str, cent.generators))
        self.trace.append(f"{label}: {', '.join(letters)} extend the centralizer <{gens}> of {g}")
        return {x: _g(x) for x in letters}

    def form_ii(self, level: NtqLevel) -> dict:
        u = self.mapped(level.center_of)
        us = [self.mapped(c) for c in level.subgroup]
        for c in us:
            if not self.tower.commute(c, u) and not self.trivial(u):
                raise ValueError(f"{c} does not commute with {u}")
        g = next((w for w in [u] + us if not self.trivial(w)), None)
        if g is None:
            self.trace.append("II: trivial subgroup, treated as a free abelian block")
            return self.form_iii(level.variables)
        return self._extend_by(g, level.variables, "II")

    # -- form I ----------------------------------------------------------
    def form_i(self, level: NtqLevel) -> dict:
        nrm = to_standard_form(level.equation, level.variables)
        q = nrm.standard
        self.trace.append(f"I: standard form {q}")
        beta = self.quadratic(q)
        mapping = dict(self.images)
        mapping.update(beta)
        return {v: self.tower.britton_reduce(substitute(nrm.automorphism[v], mapping)) for v in level.variables}

    def quadratic(self, q: StandardQuadratic) -> dict:
        atoms = list(q.atoms)
        d = self.mapped(q.d)
        atoms = [a if a.kind != CONJ else type(a)(CONJ, a.variables, self.mapped(a.constant)) for a in atoms]
        free = list(q.free_variables)
        kept = []
        for a in atoms:
            if a.kind == CONJ and self.trivial(a.constant):
                free.append(a.variables[0])
                self.trace.append(f"I: coefficient of {a.variables[0]} is trivial; it becomes a free letter")
            else:
                kept.append(a)
        atoms = kept
        rewrite = None
        if self.trivial(d) and atoms and atoms[-1].kind == CONJ:
            last = atoms.pop()
            zk = last.variables[0]
            rewrite = (zk, list(atoms))
            d = last.constant
            free.append(zk)
            self.trace.append(f"I: d is trivial; {zk} becomes a free letter and d := {d}")
        if self.trivial(d):
            d = Word()
        if not atoms:
            if d:
                raise GroupTheoryError(f"the level equation reduces to {d} = 1, which has no solution")
            out = {}
        else:
            out = self.dispatch(atoms, d)
        if free:
            out.update(self.form_iv(free))
        if rewrite:
            zk, before = rewrite
            Z = out[zk]
            for a in before:
                for v in a.variables:
                    if a.kind == CONJ:
                        out[v] = out[v] * Z
                    else:
                        out[v] = conjugate(out[v], Z)
        return out

    # -- quadratic dispatch ----------------------------------------------
    def search(self, atoms, d, want: str):
        """Bounded solution search; returns ``(solution, class)`` or ``None``.

        ``want``: ``any``, ``nontrivial``, ``noncomm``, ``gp`` or ``comm``
        (a commutative solution, non-degenerate ones preferred).
        """
        vs = tuple(v for a in atoms for v in a.variables)
        eq = _w(*[a.word for a in atoms], d)
        std = _AtomView(atoms, d)
        fallback = None
        for radius in range(self.cfg.radius_for(len(vs)) + 1):
            sols = hom_search(EqSystem(vs, self.tower, (eq,)), self.tower, radius)
            for phi in sols:
                cls = classify_solution(std, phi, self.tower)
                if want == "any":
                    return phi, cls
                if want == "nontrivial" and any(phi.values()):
                    return phi, cls
                if want == "noncomm" and cls.non_commutative:
                    return phi, cls
                if want == "gp" and cls.kind == "general_position":
                    return phi, cls
                if want == "comm" and not cls.non_commutative:
                    if cls.kind == "commutative":
                        return phi, cls
                    fallback = fallback or (phi, cls)
        return fallback

    def need(self, atoms, d, want: str, what: str):
        hit = self.search(atoms, d, want)
        if hit is None:
            r = self.cfg.radius_for(sum(len(a.variables) for a in atoms))
            raise BoundExhausted(f"no {what} found within radius {r}")
        return hit

    def dispatch(self, atoms, d) -> dict:
        q = StandardQuadratic(atoms[0].kind != SQUARE, tuple(atoms), d)
        chi = euler_char(q)
        comms = [a for a in atoms if a.kind == COMM]
        squares = [a for a in atoms if a.kind == SQUARE]
        conjs = [a for a in atoms if a.kind == CONJ]
        p, k = len(squares), len(conjs)
        label = f"I: {q} (chi={chi})"
        if comms:
            if len(comms) == 1 and not k and not d:
                self.trace.append(f"{label}: commuting pair, free abelian block")
                return self.form_iii(comms[0].variables)
            raise UnsupportedCase(f"{q}: {REGULAR_MSG}")
        if not squares:
            if k == 1:
                return self.conj_d(conjs[0], d, label)
            if self.search(atoms, d, "noncomm"):
                if chi <= -2:
                    raise UnsupportedCase(f"{q} has a non-commutative solution: {REGULAR_MSG}")
                raise UnsupportedCase(f"{q} has a non-commutative solution; no explicit embedding is available")
            phi, _ = self.need(atoms, d, "comm", "commutative solution")
            self.trace.append(f"{label}: genus zero, all solutions commutative up to the bound")
            return self.commutative(atoms, d, phi)
        if not k and not d:
            if p == 1:
                self.trace.append(f"{label}: x^2 = 1 forces x = 1")
                return {squares[0].variables[0]: Word()}
            if p == 2:
                return self.two_squares(atoms, label)
            if p == 3:
                return self.three_squares(atoms, label)
            raise UnsupportedCase(f"{q}: {REGULAR_MSG}")
        if p == 1 and not k:
            phi, _ = self.need(atoms, d, "any", "solution")
            self.trace.append(f"{label}: unique root, {squares[0].variables[0]} -> {phi[squares[0].variables[0]]}")
            return dict(phi)
        hit = self.search(atoms, d, "noncomm")
        if hit is not None:
            phi, _ = hit
            if p == 2 and not k:
                return self.squares_d(atoms, d, phi, label)
            if p == 1 and k == 1:
                return self.square_conj_d(atoms, d, phi, label)
            raise UnsupportedCase(f"{q} has a non-commutative solution: {REGULAR_MSG}")
        phi, _ = self.need(atoms, d, "comm", "commutative solution")
        self.trace.append(f"{label}: all solutions commutative up to the bound")
        return self.commutative(atoms, d, phi)

    def conj_d(self, atom, d, label) -> dict:
        z, c = atom.variables[0], atom.constant
        phi, _ = self.need([atom], d, "any", "solution")
        a = phi[z]
        t = self.fresh("t")
        self.extend(c, [t])
        self.trace.append(f"{label}: {z} -> {t} ({a}) with {t}:C({c})")
        return {z: _w(t, a)}

    def commutative(self, atoms, d, phi) -> dict:
        squares = [a.variables[0] for a in atoms if a.kind == SQUARE]
        conjs = [a for a in atoms if a.kind == CONJ]
        s = [phi[x] for x in squares]
        pieces = [conjugate(a.constant, phi[a.variables[0]]) for a in conjs] + [product_of(s)] + s
        g = next((w for w in pieces if not self.trivial(w)), None)
        if g is None:
            raise GroupTheoryError("no nontrivial element to extend")
        g = self.tower.britton_reduce(g)
        if any(not self.tower.commute(w, g) for w in pieces):
            raise BoundExhausted("the commutative solution found is degenerate; no common centralizer")
        rank = len(conjs) + max(len(squares) - 1, 0)
        out = {}
        if rank:
            ts = [self.fresh("t") for _ in range(rank)]
            self.extend(g, ts)
            for a, t in zip(conjs, ts):
                out[a.variables[0]] = _w(phi[a.variables[0]], t)
            extra = ts[len(conjs) :]
            for x, t in zip(squares, extra):
                out[x] = _w(phi[x], t)
            if squares:
                out[squares[-1]] = _w(phi[squares[-1]], *[invert(_g(t)) for t in extra])
            self.trace.append(f"commutative: rank {rank} extension of C({g}) by {', '.join(ts)}")
        else:
            out.update({x: phi[x] for x in squares})
        return out

    def two_squares(self, atoms, label) -> dict:
        x, y = (a.variables[0] for a in atoms)
        if self.search(atoms, Word(), "nontrivial") is None:
            self.trace.append(f"{label}: only the trivial solution up to the bound")
            return {x: Word(), y: Word()}
        X = self.form_iv([x])[x]
        self.trace.append(f"{label}: {x}{y} lies in the radical; free cyclic factor")
        return {x: X, y: invert(X)}

    def three_squares(self, atoms, label) -> dict:
        x, y, z = (a.variables[0] for a in atoms)
        hit = self.search(atoms, Word(), "gp")
        if hit is not None:
            return self.three_squares_gp(atoms, hit[0], label)
        if self.search(atoms, Word(), "noncomm") is not None:
            raise BoundExhausted("a non-commutative solution exists but none in general position within the bound")
        self.trace.append(f"{label}: all solutions commutative up to the bound; free abelian factor of rank 2")
        out = self.form_iii([x, y])
        out[z] = invert(out[x] * out[y])
        return out

    def squares_d(self, atoms, d, phi, label) -> dict:
        x, y = (a.variables[0] for a in atoms)
        a, b = phi[x], phi[y]
        t, s, r = self.fresh("t"), self.fresh("s"), self.fresh("r")
        self.extend(_w(a, b), [t])
        self.extend(_w(a, t, a, t), [s])
        self.extend(_w(invert(_g(s)), a, t, s, invert(_g(t)), b), [r])
        self.trace.append(f"{label}: non-commutative solution {x}->{a}, {y}->{b}; three extensions {t}, {s}, {r}")
        return {x: _w(conjugate(_w(a, t), _g(s)), r), y: _w(invert(_g(r)), invert(_g(t)), b)}

    def square_conj_d(self, atoms, d, phi, label) -> dict:
        x = atoms[0].variables[0]
        z, c = atoms[1].variables[0], atoms[1].constant
        a, b = phi[x], phi[z]
        t, s, r = self.fresh("t"), self.fresh("s"), self.fresh("r")
        self.extend(d, [t])
        self.extend(conjugate(c, b), [s])
        self.extend(conjugate(c, _w(b, t)), [r])
        self.trace.append(f"{label}: non-commutative solution {x}->{a}, {z}->{b}; three extensions {t}, {s}, {r}")
        return {x: conjugate(a, _g(t)), z: _w(b, s, t, r)}

    def three_squares_gp(self, atoms, phi, label) -> dict:
        x, y, z = (a.variables[0] for a in atoms)
        a, b, c = phi[x], phi[y], phi[z]
        s, r, v, t, u, w = (self.fresh(n) for n in ("s", "r", "v", "t", "u", "w"))
        S, R, V = _g(s), _g(r), _g(v)
        self.extend(_w(a, b), [s])
        self.extend(_w(invert(S), b, c), [r])
        self.extend(_w(a, b, R, invert(S), b, c), [v])
        vas = _w(V, a, S)
        sbr = _w(invert(S), b, R)
        rcv = _w(invert(R), c, invert(V))
        self.extend(vas * vas, [t])
        self.extend(sbr * sbr, [u])
        self.extend(rcv * rcv, [w])
        self.trace.append(
            f"{label}: general position solution {x}->{a}, {y}->{b}, {z}->{c}; "
            f"six extensions {s}, {r}, {v}, {t}, {u}, {w}"
        )
        return {x: conjugate(vas, _g(t)), y: conjugate(sbr, _g(u)), z: conjugate(rcv, _g(w))}

    # -- levels ------------------------------------------------------------
    def level(self, level: NtqLevel) -> dict:
        if level.form == "IV":
            imgs = self.form_iv(level.variables)
        elif level.form == "III":
            imgs = self.form_iii(level.variables)
        elif level.form == "II":
            imgs = self.form_ii(level)
        else:
            imgs = self.form_i(level)
        imgs = {v: self.tower.britton_reduce(w) for v, w in imgs.items()}
        for rel in level.relators():
            img = substitute(rel, {**self.images, **imgs})
            if not self.trivial(img):
                raise GroupTheoryError(f"level relator {rel} maps to the nontrivial {self.tower.britton_reduce(img)}")
        self.images.update(imgs)
        return imgs


class _AtomView:
    """Duck-typed stand-in for a standard word built from atoms and ``d``."""

    def __init__(self, atoms, d):
        self.atoms = tuple(atoms)
        self.d = d

    @property
    def word(self) -> Word:
        return _w(*[a.word for a in self.atoms], self.d)


def _start(current: Tower | Presentation, images, reserved, cfg) -> _Builder:
    tower = current if isinstance(current, Tower) else Tower(current, bound=cfg.centralizer_bound)
    base = {g: _g(g) for g in tower.generators}
    base.update(images or {})
    return _Builder(tower, base, reserved, cfg)


def embed_level(
    current: Tower | Presentation,
    level: NtqLevel,
    config: EmbedConfig | None = None,
    images: Mapping[str, Word] | None = None,
    reserved=(),
) -> tuple:
    """Embed one level over ``current``.

    ``images`` sends the symbols of the group below to words of ``current``
    (identity by default).  Returns ``(tower, images of the level variables,
    case trace)``.
    """
    b = _start(current, images, set(reserved) | set(level.variables), config or EmbedConfig())
    imgs = b.level(level)
    return b.tower, imgs, b.trace


def embed_quadratic(
    current: Tower | Presentation,
    q: StandardQuadratic,
    config: EmbedConfig | None = None,
    images: Mapping[str, Word] | None = None,
    reserved=(),
) -> tuple:
    return embed_level(current, NtqLevel.quadratic(q), config, images, reserved)


def embed_ntq(ntq: NtqSystem, config: EmbedConfig | None = None) -> EmbeddingResult:
    cfg = config or EmbedConfig()
    b = _start(ntq.base, None, set(ntq.variables), cfg)
    for lvl in reversed(ntq.levels):
        b.level(lvl)
    images = {g: b.images[g] for g in ntq.generators}
    hom = GroupHom(ntq.coordinate_presentation(), b.tower, images, name=ntq.name)
    res = EmbeddingResult(b.tower, hom, b.trace)
    res.verify = verify_hom(hom)
    if cfg.verify_radius > 0:
        res.injectivity = sample_embedding(ntq, res, cfg.verify_radius, cfg.seed)
    return res


def sample_embedding(ntq: NtqSystem, res: EmbeddingResult, radius: int, seed: int = 0) -> InjectivityResult:
    src = ntq.coordinate_tower()
    if src is None:
        return InjectivityResult("unsupported", radius, note="quadratic levels: the source has no word problem here")
    h = GroupHom(src, res.tower, res.hom.images)
    out = injectivity_sample(h, radius, seed)
    if out.passed:
        res.hom.status = h.status
    return out


# ----------------------------------------------------------------------
# pipeline
# ----------------------------------------------------------------------


@dataclass
class PipelineResult:
    index: int
    embedding: EmbeddingResult | None = None
    phi: GroupHom | None = None
    verify: VerifyResult | None = None
    injectivity: InjectivityResult | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.verify is not None and self.verify.ok

    def kills(self, w: Word) -> bool:
        return self.phi is not None and self.phi.target.is_trivial(self.phi(w))


def run_pipeline(G, inputs: Sequence[tuple], config: EmbedConfig | None = None) -> list:
    """For each ``(ntq, rho)`` build ``H_i`` and ``phi_i = beta_i . rho_i``.

    ``G`` is a presentation or a tower; ``rho`` sends every generator of ``G``
    to a word in the generators of the NTQ system.  Failures are recorded per
    input and do not stop the others.
    """
    cfg = config or EmbedConfig()
    out = []
    for i, (ntq, rho) in enumerate(inputs):
        pr = PipelineResult(i)
        try:
            emb = embed_ntq(ntq, EmbedConfig(cfg.solution_radius, 0, cfg.centralizer_bound, cfg.seed))
            pr.embedding = emb
            imgs = {g: emb.hom(rho[g] if isinstance(rho[g], Word) else Word.parse(rho[g])) for g in G.generators}
            pr.phi = GroupHom(G, emb.tower, imgs, name=f"phi_{i + 1}")
            pr.verify = verify_hom(pr.phi)
            if not pr.verify.ok:
                pr.error = f"relator {pr.verify.failing_relator} does not map to the identity"
            elif cfg.verify_radius > 0:
                pr.injectivity = injectivity_sample(pr.phi, cfg.verify_radius, cfg.seed)
        except (GroupTheoryError, ValueError, KeyError) as exc:
            pr.error = f"{type(exc).__name__}: {exc}"
        out.append(pr)
    return out
