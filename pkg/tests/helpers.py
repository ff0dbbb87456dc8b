"""Shared builders for dataset objects used across the test modules."""

from lowrisk.dataset import MethodRecord, Snapshot, UnifiedMethod
from lowrisk.discretize import ATTRIBUTE_ITEMS, LABEL_FAULTY, LABEL_NOT_FAULTY, ItemVector
from lowrisk.java.analyzer import MethodIdentity
from lowrisk.java.metrics import CategoryFlags, ConstructKind, RawMetrics

_BY_COLUMN = {kind.value: kind for kind in ConstructKind}


def make_metrics(sloc=1, cc=1, nesting=0, chaining=0, variables=0, **counts) -> RawMetrics:
    """RawMetrics with construct counts given by column name, e.g. loops=2."""
    cc_map = {kind: 0 for kind in ConstructKind}
    for column, value in counts.items():
        cc_map[_BY_COLUMN[column]] = value
    return RawMetrics(
        sloc=sloc,
        cyclomatic_complexity=cc,
        max_nesting=nesting,
        max_chaining=chaining,
        unique_variable_ids=variables,
        construct_counts=cc_map,
    )


def make_identity(name="m", project="p", file_path="A.java", type_name="A", params=()) -> MethodIdentity:
    return MethodIdentity(
        project=project,
        file_path=file_path,
        type_name=type_name,
        method_name=name,
        param_signature=tuple(params),
    )


def make_record(
    name="m",
    metrics=None,
    categories=None,
    faulty=False,
    project="p",
    **identity_kw,
) -> MethodRecord:
    return MethodRecord(
        identity=make_identity(name, project=project, **identity_kw),
        metrics=metrics if metrics is not None else make_metrics(),
        categories=categories if categories is not None else CategoryFlags(),
        faulty=faulty,
        snapshot=Snapshot.FAULTY if faulty else Snapshot.CURRENT,
    )


def make_unified(record_or_records, faulty=None) -> UnifiedMethod:
    records = (
        list(record_or_records)
        if isinstance(record_or_records, (list, tuple))
        else [record_or_records]
    )
    if faulty is None:
        faulty = records[0].faulty
    return UnifiedMethod(records[0].identity, faulty, tuple(records))


def make_vector(true_items=(), not_faulty=True) -> ItemVector:
    """ItemVector with the named attribute items set to true."""
    true_items = set(true_items)
    unknown = true_items - set(ATTRIBUTE_ITEMS)
    if unknown:
        raise ValueError(f"unknown items: {unknown}")
    items = tuple(name in true_items for name in ATTRIBUTE_ITEMS)
    return ItemVector(items, LABEL_NOT_FAULTY if not_faulty else LABEL_FAULTY)
