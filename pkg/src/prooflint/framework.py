"""Linter registry, runner, nolint suppression, and report formatting."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import basic_lints, simp_lints, typeclass_lints
from .core import Declaration, Environment, Name
from .simp import NotAnEquation, SimpLemma, SimpSet
from .typeclass import InstanceDb, build_instance_db


class UnknownLinter(Exception):
    def __init__(self, name: str):
        super().__init__(f"unknown linter {name!r}")
        self.name = name


class UnknownFile(Exception):
    def __init__(self, name: str):
        super().__init__(f"no declarations from file {name!r}")
        self.name = name


class LintContext:
    """Shared read-only indexes, built lazily once per lint run."""

    def __init__(self, env: Environment):
        self.env = env
        self._instance_db: Optional[InstanceDb] = None
        self._simp_set: Optional[SimpSet] = None

    @property
    def instance_db(self) -> InstanceDb:
        if self._instance_db is None:
            self._instance_db = build_instance_db(self.env)
        return self._instance_db

    @property
    def simp_set(self) -> SimpSet:
        if self._simp_set is None:
            from .simp import compile_simp_lemma
            lemmas: list[SimpLemma] = []
            for order_index, d in enumerate(self.env.declarations):
                if not d.has_attr("simp"):
                    continue
                try:
                    lemmas.append(compile_simp_lemma(self.env, d, order_index))
                except NotAnEquation:
                    continue  # surfaced by the CLI on demand, not a lint crash
            self._simp_set = SimpSet(tuple(lemmas))
        return self._simp_set


@dataclass(frozen=True)
class Linter:
    name: str
    test: Callable[[Declaration, LintContext], Optional[str]]
    no_errors_found: str
    errors_found: str
    priority: int = 1000
    auto_decls: bool = False


def builtin_linters() -> list[Linter]:
    """The fourteen built-in linters."""
    return [
        Linter("doc_blame",
               lambda d, ctx: basic_lints.lint_doc_blame(d),
               "No definitions are missing documentation.",
               "DEFINITIONS ARE MISSING DOCUMENTATION STRINGS",
               priority=1450),
        Linter("dup_namespace",
               lambda d, ctx: basic_lints.lint_dup_namespace(d),
               "No declarations have a duplicated namespace.",
               "DUPLICATED NAMESPACES IN DECLARATION NAMES"),
        Linter("def_lemma",
               lambda d, ctx: basic_lints.lint_def_lemma(ctx.env, d),
               "All declarations correctly marked as def/lemma.",
               "INCORRECT DEF/LEMMA DECLARATIONS"),
        Linter("ge_or_gt",
               lambda d, ctx: basic_lints.lint_illegal_constants(d),
               "Not using ≥/> in declarations.",
               "DECLARATION TYPES USE GE/GT"),
        Linter("unused_arguments",
               lambda d, ctx: basic_lints.lint_unused_arguments(d),
               "No unused arguments.",
               "UNUSED ARGUMENTS"),
        Linter("instance_priority",
               lambda d, ctx: typeclass_lints.lint_instance_priority(ctx.env, d),
               "All forgetful instances have a priority below the default.",
               "FORGETFUL INSTANCES WITH DEFAULT PRIORITY"),
        Linter("dangerous_instance",
               lambda d, ctx: typeclass_lints.lint_dangerous_instance(ctx.env, d),
               "No dangerous instances.",
               "DANGEROUS INSTANCES FOUND"),
        Linter("impossible_instance",
               lambda d, ctx: typeclass_lints.lint_impossible_instance(ctx.env, d),
               "All instances are applicable.",
               "IMPOSSIBLE INSTANCES FOUND"),
        Linter("incorrect_type_class_argument",
               lambda d, ctx: typeclass_lints.lint_incorrect_type_class_argument(
                   ctx.env, d),
               "All instance-implicit arguments are type classes.",
               "INVALID INSTANCE-IMPLICIT ARGUMENTS"),
        Linter("has_inhabited_instance",
               lambda d, ctx: typeclass_lints.lint_has_inhabited_instance(
                   ctx.env, ctx.instance_db, d),
               "All concrete types have an inhabited instance.",
               "TYPES ARE MISSING INHABITED INSTANCES"),
        Linter("inhabited_nonempty",
               lambda d, ctx: typeclass_lints.lint_inhabited_nonempty(ctx.env, d),
               "No inhabited arguments that should be nonempty.",
               "INHABITED ARGUMENTS SHOULD BE NONEMPTY"),
        Linter("simp_nf",
               lambda d, ctx: simp_lints.lint_simp_nf(ctx.env, ctx.simp_set, d),
               "All simp lemmas are in simp-normal form.",
               "SIMP LEMMAS NOT IN SIMP-NORMAL FORM"),
        Linter("simp_comm",
               lambda d, ctx: simp_lints.lint_simp_comm(ctx.env, ctx.simp_set, d),
               "No commutativity lemmas are tagged simp.",
               "COMMUTATIVITY LEMMAS TAGGED SIMP"),
        Linter("simp_var_head",
               lambda d, ctx: simp_lints.lint_simp_var_head(ctx.env, ctx.simp_set, d),
               "No simp lemmas have a variable head symbol.",
               "SIMP LEMMAS WITH VARIABLE HEAD SYMBOL"),
    ]


# ---------------------------------------------------------------------------
# Scopes


@dataclass(frozen=True)
class AllScope:
    def describe(self) -> str:
        return "all declarations"

    def selects(self, d: Declaration) -> bool:
        return True


@dataclass(frozen=True)
class FileScope:
    file: str

    def describe(self) -> str:
        return f"declarations in {self.file}"

    def selects(self, d: Declaration) -> bool:
        return d.file == self.file


@dataclass(frozen=True)
class UpToLineScope:
    file: str
    line: int

    def describe(self) -> str:
        return f"declarations in {self.file} up to line {self.line}"

    def selects(self, d: Declaration) -> bool:
        return d.file == self.file and d.line <= self.line


# ---------------------------------------------------------------------------
# Running


@dataclass(frozen=True)
class Finding:
    declaration: Name
    file: str
    line: int
    message: str


@dataclass(frozen=True)
class Bucket:
    linter: Linter
    findings: tuple[Finding, ...]


@dataclass(frozen=True)
class LintReport:
    buckets: tuple[Bucket, ...]
    scope_description: str
    checked: int

    @property
    def total_findings(self) -> int:
        return sum(len(b.findings) for b in self.buckets)

    def finding_pairs(self) -> set[tuple[str, str]]:
        return {(b.linter.name, str(f.declaration))
                for b in self.buckets for f in b.findings}


def _nolint_names(d: Declaration) -> tuple[str, ...]:
    attr = d.attr("nolint")
    return attr.args if attr is not None else ()


def run_linters(env: Environment, scope=AllScope(),
                only: Optional[list[str]] = None,
                respect_nolint: bool = True,
                jobs: int = 1) -> LintReport:
    """Run linters over the in-scope declarations of an environment.

    The report is deterministic for any worker count: findings are keyed by
    declaration order and buckets by descending linter priority, then name.
    """
    registry = builtin_linters()
    by_name = {l.name: l for l in registry}
    if only is not None:
        for name in only:
            if name not in by_name:
                raise UnknownLinter(name)
        selected = [l for l in registry if l.name in set(only)]
    else:
        selected = registry

    if isinstance(scope, (FileScope, UpToLineScope)):
        if not any(d.file == scope.file for d in env.declarations):
            raise UnknownFile(scope.file)

    decls = [d for d in env.declarations if scope.selects(d)]
    ctx = LintContext(env)

    def check(pair: tuple[Linter, int, Declaration]
              ) -> Optional[tuple[str, int, Finding]]:
        linter, order, d = pair
        if d.is_auto_generated and not linter.auto_decls:
            return None
        if respect_nolint and linter.name in _nolint_names(d):
            return None
        message = linter.test(d, ctx)
        if message is None:
            return None
        return (linter.name, order, Finding(d.name, d.file, d.line, message))

    work = [(linter, order, d)
            for linter in selected for order, d in enumerate(decls)]
    if jobs > 1:
        # shared indexes are built up front so worker threads only read
        _ = ctx.instance_db, ctx.simp_set
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(check, work))
    else:
        raw = [check(item) for item in work]

    per_linter: dict[str, list[tuple[int, Finding]]] = {l.name: [] for l in selected}
    for item in raw:
        if item is not None:
            name, order, finding = item
            per_linter[name].append((order, finding))

    ordered = sorted(selected, key=lambda l: (-l.priority, l.name))
    buckets = tuple(
        Bucket(linter,
               tuple(f for _, f in sorted(per_linter[linter.name],
                                          key=lambda of: of[0])))
        for linter in ordered)
    return LintReport(buckets, scope.describe(), len(decls))


def format_report(report: LintReport) -> str:
    """Human-readable text rendering; byte-identical across repeated runs."""
    lines = [f"-- Checking {report.checked} declarations ({report.scope_description})"]
    for bucket in report.buckets:
        lines.append("")
        if not bucket.findings:
            lines.append(f"-- OK [{bucket.linter.name}]: "
                         f"{bucket.linter.no_errors_found}")
            continue
        lines.append(f"/- {bucket.linter.errors_found}: -/")
        for f in bucket.findings:
            lines.append(f"{f.file}:{f.line} {f.declaration} : {f.message}")
    lines.append("")
    total = report.total_findings
    lines.append(f"-- Found {total} lint issue{'' if total == 1 else 's'}")
    return "\n".join(lines) + "\n"
