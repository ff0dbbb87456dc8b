"""Method enumeration and per-method analysis of Java source trees."""

from __future__ import annotations

from dataclasses import dataclass
from fnmatch import fnmatch
from pathlib import Path
from typing import Iterable

from lowrisk.errors import JavaParseError
from lowrisk.java.metrics import CategoryFlags, RawMetrics, scan_method
from lowrisk.java.structure import MethodDecl, parse_compilation_unit


@dataclass(frozen=True, order=True)
class MethodIdentity:
    """Stable identity of a method within a project snapshot.

    (file_path, type_name, method_name, param_signature) uniquely identify a
    method within a project; the signature is built from declared parameter
    types, never argument names.
    """

    project: str
    file_path: str
    type_name: str
    method_name: str
    param_signature: tuple[str, ...]
    is_constructor: bool = False

    def key(self) -> tuple:
        return (self.project, self.file_path, self.type_name, self.method_name, self.param_signature)


@dataclass(frozen=True)
class AnalyzedMethod:
    identity: MethodIdentity
    metrics: RawMetrics
    categories: CategoryFlags


@dataclass(frozen=True)
class SkippedMethod:
    """A method excluded from analysis, with the reason (e.g. lambda body)."""

    identity: MethodIdentity
    reason: str


def _identity_for(decl: MethodDecl, file_path: str, project: str) -> MethodIdentity:
    return MethodIdentity(
        project=project,
        file_path=file_path,
        type_name=".".join(decl.type_chain),
        method_name=decl.name,
        param_signature=decl.param_types,
        is_constructor=decl.is_constructor,
    )


def enumerate_methods(
    source_text: str, file_path: str, project: str = ""
) -> list[tuple[MethodIdentity, MethodDecl]]:
    """List every non-abstract method and constructor declaration.

    Methods of nested, local, and anonymous types are included and attributed
    to their enclosing type chain. Raises JavaParseError when the source is
    rejected; callers may skip the file and record it in the run report.
    """
    unit = parse_compilation_unit(source_text, file_path)
    out = [(_identity_for(d, file_path, project), d) for d in unit.methods]
    out.sort(key=lambda pair: (pair[0], pair[1].decl_start))
    return out


def analyze_source(
    source_text: str, file_path: str, project: str = ""
) -> tuple[list[AnalyzedMethod], list[SkippedMethod]]:
    """Compute metrics and categories for every method in one source file.

    Methods whose bodies contain lambda expressions are excluded and reported
    as skipped instead of being given unreliable counts.
    """
    unit = parse_compilation_unit(source_text, file_path)
    analyzed: list[AnalyzedMethod] = []
    skipped: list[SkippedMethod] = []
    for decl in unit.methods:
        identity = _identity_for(decl, file_path, project)
        if decl.has_lambda:
            skipped.append(SkippedMethod(identity, "lambda expression in body"))
            continue
        metrics, categories = scan_method(unit.tokens, decl)
        analyzed.append(AnalyzedMethod(identity, metrics, categories))
    analyzed.sort(key=lambda m: m.identity)
    return analyzed, skipped


@dataclass
class ProjectScanReport:
    """Per-run diagnostics from walking a source tree."""

    files_analyzed: int = 0
    parse_failures: list[tuple[str, str]] = None
    skipped_methods: list[SkippedMethod] = None

    def __post_init__(self):
        if self.parse_failures is None:
            self.parse_failures = []
        if self.skipped_methods is None:
            self.skipped_methods = []


def iter_java_files(
    root: Path, include: Iterable[str] = ("**/*.java",), exclude: Iterable[str] = ()
) -> list[Path]:
    include = tuple(include) or ("**/*.java",)
    exclude = tuple(exclude)
    seen: set[Path] = set()
    for pattern in include:
        for path in sorted(root.glob(pattern)):
            if not path.is_file():
                continue
            rel = path.relative_to(root).as_posix()
            if any(fnmatch(rel, pat) for pat in exclude):
                continue
            seen.add(path)
    return sorted(seen)


def analyze_project(
    root: str | Path,
    project: str,
    include: Iterable[str] = ("**/*.java",),
    exclude: Iterable[str] = (),
) -> tuple[list[AnalyzedMethod], ProjectScanReport]:
    """Analyze all matching Java files under a project root.

    Files that fail to parse are skipped and recorded in the report; the
    remaining results are merged deterministically by method identity.
    """
    root = Path(root)
    report = ProjectScanReport()
    methods: list[AnalyzedMethod] = []
    for path in iter_java_files(root, include, exclude):
        rel = path.relative_to(root).as_posix()
        try:
            text = path.read_text(encoding="utf-8")
            analyzed, skipped = analyze_source(text, rel, project)
        except (JavaParseError, UnicodeDecodeError) as exc:
            report.parse_failures.append((rel, str(exc)))
            continue
        report.files_analyzed += 1
        report.skipped_methods.extend(skipped)
        methods.extend(analyzed)
    methods.sort(key=lambda m: m.identity)
    return methods, report
