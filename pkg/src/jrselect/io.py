"""File formats, dataset fetching, and representation reports.

CSV schemas (all 0-indexed, headers required):

- approvals: ``user_id,item_id,value`` with value in {0, 1} (binary mode)
  or [0, 1] (probability mode, thresholded strictly above the cutoff);
  absent pairs default to 0.
- groups: ``user_id,group_id``; group ids may be arbitrary labels and are
  mapped to block indices in sorted label order; user ids must cover
  0..n-1 exactly once.
- scores: ``item_id,score`` with non-negative scores.

JSON mirrors use the same field names. Exact rational numbers serialize as
"p/q" strings in JSON and as 12-significant-digit decimals in CSV.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import shutil
import urllib.error
import urllib.parse
import urllib.request
import zipfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .core import (
    ApprovalProfile,
    GroupPartition,
    Instance,
    Score,
    item_mask,
    threshold_probabilistic_approvals,
)
from .errors import (
    ChecksumError,
    DuplicatePairError,
    DuplicateUserError,
    MissingUserError,
    MixedModeError,
    NegativeScoreError,
    NetworkError,
    ParseError,
    ProbabilityError,
    ValidationError,
)
from .jr import unrepresented_mask
from .mallows import SimulationReport

APPROVAL_HEADER = ["user_id", "item_id", "value"]
GROUP_HEADER = ["user_id", "group_id"]
SCORE_HEADER = ["item_id", "score"]


def format_number(value) -> str:
    """12-significant-digit decimal used in every CSV the package writes."""
    return f"{float(value):.12g}"


def score_to_json(score: Score | None):
    """JSON form of a score or price: "p/q" for rationals, number otherwise."""
    if score is None:
        return None
    if isinstance(score, Fraction):
        return f"{score.numerator}/{score.denominator}"
    if isinstance(score, int):
        return score
    return float(score)


def score_from_json(value) -> Score | None:
    if value is None:
        return None
    if isinstance(value, str):
        num, _, den = value.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(value, int):
        return value
    return float(value)


# ---------------------------------------------------------------------------
# CSV parsing
# ---------------------------------------------------------------------------


def _read_rows(path, expected_header: list[str]):
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc})")
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, expected header {','.join(expected_header)}")
        header = [cell.strip() for cell in header]
        if header != expected_header:
            raise ParseError(
                f"{path}: header {','.join(header)!r} does not match {','.join(expected_header)!r}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(expected_header):
                raise ParseError(f"{path}:{lineno}: expected {len(expected_header)} fields, got {len(row)}")
            rows.append((lineno, [cell.strip() for cell in row]))
    return path, rows


def _parse_index(path, lineno, text, kind) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: {kind} id {text!r} is not an integer")
    if value < 0:
        raise ParseError(f"{path}:{lineno}: {kind} id {value} is negative")
    return value


def parse_approval_csv(path, mode: str = "binary", cutoff: float = 0.5) -> ApprovalProfile:
    """Read an approval CSV into a dense profile.

    ``mode`` is "binary" (values must be exactly 0 or 1; anything else
    raises :class:`MixedModeError`) or "probability" (values in [0, 1],
    thresholded strictly above ``cutoff``). n and m are one past the
    largest user and item id seen.
    """
    if mode not in ("binary", "probability"):
        raise ParseError(f"unknown approval mode {mode!r}")
    path, rows = _read_rows(path, APPROVAL_HEADER)
    if not rows:
        raise ParseError(f"{path}: no users (data rows are required)")
    seen: dict[tuple[int, int], float] = {}
    n = m = 0
    for lineno, (user_text, item_text, value_text) in rows:
        user = _parse_index(path, lineno, user_text, "user")
        item = _parse_index(path, lineno, item_text, "item")
        try:
            value = float(value_text)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: value {value_text!r} is not a number")
        if (user, item) in seen:
            raise DuplicatePairError(f"{path}:{lineno}: duplicate pair user={user}, item={item}")
        if mode == "binary":
            if value not in (0.0, 1.0):
                raise MixedModeError(
                    f"{path}:{lineno}: value {value_text} is not binary; "
                    "use probability mode for fractional values"
                )
        else:
            if not 0.0 <= value <= 1.0:
                raise ProbabilityError(f"{path}:{lineno}: probability {value} outside [0, 1]")
        seen[(user, item)] = value
        n = max(n, user + 1)
        m = max(m, item + 1)
    matrix = [[0.0] * m for _ in range(n)]
    for (user, item), value in seen.items():
        matrix[user][item] = value
    if mode == "binary":
        approvals = [{i for i in range(m) if row[i] == 1.0} for row in matrix]
    else:
        approvals = threshold_probabilistic_approvals(matrix, cutoff)
    return ApprovalProfile(approvals, m)


def write_approvals_csv(profile: ApprovalProfile, path) -> None:
    """Write the dense 0/1 approval matrix (lossless round-trip)."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(APPROVAL_HEADER)
        for user in range(profile.n):
            mask = profile.approval_masks[user]
            for item in range(profile.m):
                writer.writerow([user, item, mask >> item & 1])


def parse_groups_csv(path) -> GroupPartition:
    """Read a user -> group-label file covering users 0..n-1 exactly once."""
    path, rows = _read_rows(path, GROUP_HEADER)
    if not rows:
        raise ParseError(f"{path}: no users (data rows are required)")
    labels: dict[int, str] = {}
    for lineno, (user_text, label) in rows:
        user = _parse_index(path, lineno, user_text, "user")
        if user in labels:
            raise DuplicateUserError(f"{path}:{lineno}: user {user} assigned twice")
        if not label:
            raise ParseError(f"{path}:{lineno}: empty group id")
        labels[user] = label
    n = max(labels) + 1
    missing = [u for u in range(n) if u not in labels]
    if missing:
        raise MissingUserError(f"{path}: users {missing} have no group")
    ordered = sorted(set(labels.values()))
    index = {label: g for g, label in enumerate(ordered)}
    return GroupPartition([index[labels[u]] for u in range(n)])


def write_groups_csv(groups: GroupPartition, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(GROUP_HEADER)
        for user, g in enumerate(groups.assignment):
            writer.writerow([user, g])


def parse_scores_csv(path) -> dict[int, float]:
    """Read an item -> score file (non-negative scores, unique items)."""
    path, rows = _read_rows(path, SCORE_HEADER)
    scores: dict[int, float] = {}
    for lineno, (item_text, score_text) in rows:
        item = _parse_index(path, lineno, item_text, "item")
        try:
            score = float(score_text)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: score {score_text!r} is not a number")
        if math.isnan(score):
            raise ParseError(f"{path}:{lineno}: score is NaN")
        if score < 0:
            raise NegativeScoreError(f"{path}:{lineno}: score {score} is negative")
        if item in scores:
            raise ParseError(f"{path}:{lineno}: duplicate item {item}")
        scores[item] = score
    if not scores:
        raise ParseError(f"{path}: no scores (data rows are required)")
    return scores


def write_scores_csv(scores, path) -> None:
    path = Path(path)
    if not isinstance(scores, dict):
        scores = {i: s for i, s in enumerate(scores)}
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SCORE_HEADER)
        for item in sorted(scores):
            writer.writerow([item, format_number(scores[item])])


def load_instance(
    approvals_path,
    k: int,
    groups_path=None,
    scores_path=None,
    mode: str = "binary",
    cutoff: float = 0.5,
) -> Instance:
    """Assemble an instance from its CSV files."""
    profile = parse_approval_csv(approvals_path, mode=mode, cutoff=cutoff)
    groups = parse_groups_csv(groups_path) if groups_path else None
    scores = None
    if scores_path:
        scores = parse_scores_csv(scores_path)
    return Instance(profile, k, groups, scores)


# ---------------------------------------------------------------------------
# JSON mirrors
# ---------------------------------------------------------------------------


def instance_to_dict(instance: Instance) -> dict:
    data = {
        "n": instance.n,
        "m": instance.m,
        "k": instance.k,
        "approvals": [sorted(s) for s in instance.profile.approval_sets],
        "groups": None,
        "external_scores": None,
    }
    if instance.groups is not None:
        data["groups"] = {"gamma": instance.groups.gamma, "assignment": list(instance.groups.assignment)}
    if instance.external_scores is not None:
        data["external_scores"] = list(instance.external_scores)
    return data


def instance_from_dict(data: dict) -> Instance:
    try:
        approvals = data["approvals"]
        n, m, k = data["n"], data["m"], data["k"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"instance JSON is missing field {exc}")
    if len(approvals) != n:
        raise ParseError(f"instance JSON declares n={n} but has {len(approvals)} approval sets")
    profile = ApprovalProfile(approvals, m)
    groups = None
    if data.get("groups") is not None:
        groups = GroupPartition(data["groups"]["assignment"])
    scores = data.get("external_scores")
    return Instance(profile, k, groups, scores)


def save_instance_json(instance: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n", encoding="utf-8")


def load_instance_json(path) -> Instance:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc})")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})")
    return instance_from_dict(data)


def write_instance_files(instance: Instance, directory) -> list[Path]:
    """Write approvals/groups/scores CSVs plus the JSON mirror to a directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    approvals = directory / "approvals.csv"
    write_approvals_csv(instance.profile, approvals)
    written.append(approvals)
    if instance.groups is not None:
        groups = directory / "groups.csv"
        write_groups_csv(instance.groups, groups)
        written.append(groups)
    if instance.external_scores is not None:
        scores = directory / "scores.csv"
        write_scores_csv(instance.external_scores, scores)
        written.append(scores)
    meta = directory / "instance.json"
    save_instance_json(instance, meta)
    written.append(meta)
    return written


# ---------------------------------------------------------------------------
# Representation reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupRepresentation:
    group: int
    size: int
    unrepresented_count: int
    unrepresented_fraction: Fraction


@dataclass(frozen=True)
class RepresentationReport:
    """Who is left without any approved item in a committee."""

    committee: tuple[int, ...]
    rule: str
    total_users: int
    unrepresented_count: int
    unrepresented_fraction: Fraction
    per_group: tuple[GroupRepresentation, ...]


def representation_report(items: Iterable[int], instance: Instance, rule: str = "") -> RepresentationReport:
    """Count users (overall and per group) with no approved committee item."""
    committee = tuple(sorted(set(items)))
    s_mask = item_mask(committee, instance.m)
    unrep = unrepresented_mask(s_mask, instance)
    count = unrep.bit_count()
    per_group = []
    if instance.groups is not None:
        for g, (mask, size) in enumerate(zip(instance.groups.block_masks, instance.groups.block_sizes)):
            in_group = (unrep & mask).bit_count()
            per_group.append(GroupRepresentation(g, size, in_group, Fraction(in_group, size)))
    return RepresentationReport(
        committee=committee,
        rule=rule,
        total_users=instance.n,
        unrepresented_count=count,
        unrepresented_fraction=Fraction(count, instance.n),
        per_group=tuple(per_group),
    )


def representation_report_to_dict(report: RepresentationReport) -> dict:
    return {
        "committee": list(report.committee),
        "rule": report.rule,
        "total_users": report.total_users,
        "unrepresented_count": report.unrepresented_count,
        "unrepresented_fraction": score_to_json(report.unrepresented_fraction),
        "per_group": [
            {
                "group": row.group,
                "size": row.size,
                "unrepresented_count": row.unrepresented_count,
                "unrepresented_fraction": score_to_json(row.unrepresented_fraction),
            }
            for row in report.per_group
        ],
    }


def representation_report_to_csv(report: RepresentationReport) -> str:
    lines = ["scope,group,size,unrepresented_count,unrepresented_fraction"]
    lines.append(
        "overall,,{},{},{}".format(
            report.total_users,
            report.unrepresented_count,
            format_number(report.unrepresented_fraction),
        )
    )
    for row in report.per_group:
        lines.append(
            "group,{},{},{},{}".format(
                row.group, row.size, row.unrepresented_count, format_number(row.unrepresented_fraction)
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Simulation report serialization
# ---------------------------------------------------------------------------

SWEEP_HEADER = "phi,mean_price,max_price,bound,s,undefined_count"


def sweep_to_csv(report: SimulationReport) -> str:
    """Pinned CSV form: phi,mean_price,max_price,bound,s,undefined_count."""
    lines = [SWEEP_HEADER]
    for i, phi in enumerate(report.phi_grid):
        lines.append(
            ",".join(
                [
                    format_number(phi),
                    format_number(report.mean_price[i]),
                    format_number(report.max_price[i]),
                    format_number(report.bound[i]),
                    str(report.blowup_sizes[i]),
                    str(report.undefined_counts[i]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def sweep_to_dict(report: SimulationReport) -> dict:
    return {
        "rule": report.rule,
        "n": report.n,
        "m": report.m,
        "k": report.k,
        "tau": report.tau,
        "delta": report.delta,
        "sims": report.sims,
        "seed": report.seed,
        "gamma": report.gamma,
        "phi": list(report.phi_grid),
        "mean_price": [None if math.isnan(v) else v for v in report.mean_price],
        "max_price": [None if math.isnan(v) else v for v in report.max_price],
        "bound": [None if math.isinf(v) else v for v in report.bound],
        "s": list(report.blowup_sizes),
        "undefined_count": list(report.undefined_counts),
    }


def write_sweep_svg(report: SimulationReport, path) -> None:
    """Three-curve SVG: solid mean, dotted max, dash-dot analytic bound.

    Unbounded or undefined points are left out of their curve.
    """
    import matplotlib

    matplotlib.use("svg")
    from matplotlib import pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    phis = report.phi_grid

    def finite(values):
        xs, ys = [], []
        for x, y in zip(phis, values):
            if not (math.isnan(y) or math.isinf(y)):
                xs.append(x)
                ys.append(y)
        return xs, ys

    xs, ys = finite(report.mean_price)
    ax.plot(xs, ys, "-", color="tab:blue", label="mean price")
    xs, ys = finite(report.max_price)
    ax.plot(xs, ys, ":", color="tab:red", label="max price")
    xs, ys = finite(report.bound)
    ax.plot(xs, ys, "-.", color="tab:green", label=f"bound (delta={report.delta:g})")
    ax.set_xlabel("dispersion phi")
    ax.set_ylabel("price of JR (greedy)")
    ax.set_title(f"rule={report.rule}, n={report.n}, m={report.m}, k={report.k}, tau={report.tau}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(Path(path), format="svg")
    plt.close(fig)


# ---------------------------------------------------------------------------
# Dataset fetching
# ---------------------------------------------------------------------------


def _cache_paths(url: str, cache_dir: Path) -> tuple[Path, Path]:
    digest = hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]
    name = Path(urllib.parse.urlparse(url).path).name or "download"
    target = cache_dir / f"{digest}-{name}"
    return target, cache_dir / f"{digest}-{name}.extracted"


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def fetch_dataset(
    url: str,
    cache_dir,
    offline: bool = False,
    sha256: str | None = None,
    timeout: float = 30.0,
) -> list[Path]:
    """Download a dataset file into the cache, unpacking zip archives.

    Returns the local paths (archive members for a zip, otherwise the
    single cached file). A warm cache is served without touching the
    network, so repeated calls are idempotent; ``offline=True`` forbids
    network access entirely and raises :class:`NetworkError` on a cold
    cache. When ``sha256`` is pinned, a digest mismatch raises
    :class:`ChecksumError` (stale cached copies are refetched once before
    failing).
    """
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    target, extract_dir = _cache_paths(url, cache_dir)

    def verified(path: Path) -> bool:
        return sha256 is None or _sha256_file(path) == sha256.lower()

    if target.exists() and not verified(target):
        if offline:
            raise ChecksumError(f"cached copy of {url} does not match the pinned digest")
        target.unlink()
        shutil.rmtree(extract_dir, ignore_errors=True)
    if not target.exists():
        if offline:
            raise NetworkError(f"offline and no cached copy of {url}")
        tmp = target.with_suffix(target.suffix + ".part")
        try:
            with urllib.request.urlopen(url, timeout=timeout) as response, tmp.open("wb") as out:
                shutil.copyfileobj(response, out)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            tmp.unlink(missing_ok=True)
            raise NetworkError(f"could not fetch {url}: {exc}") from exc
        if not verified(tmp):
            tmp.unlink(missing_ok=True)
            raise ChecksumError(f"fetched {url} but the sha256 digest does not match")
        tmp.replace(target)
    if zipfile.is_zipfile(target):
        if not extract_dir.is_dir():
            with zipfile.ZipFile(target) as archive:
                archive.extractall(extract_dir)
        return sorted(p for p in extract_dir.rglob("*") if p.is_file())
    return [target]


def question_instances_from_files(
    paths: Sequence[Path], k: int, cutoff: float = 0.5
) -> dict[str, Instance]:
    """Adapter boundary for fetched corpora.

    Two layouts are recognized: directories containing this package's own
    canonical bundle (``approvals.csv`` (+ optional ``groups.csv`` /
    ``scores.csv``)), keyed by the directory name; and wide probability
    matrices (one CSV per question: a header row, then one row per user
    with per-item approval probabilities in columns 1..m, user id in
    column 0), keyed by the file stem. Files that match neither layout
    are skipped. The exact schema of any given public corpus is not
    pinned here; adapting to a new one should only mean extending this
    function.
    """
    instances: dict[str, Instance] = {}
    by_dir: dict[Path, dict[str, Path]] = {}
    for path in paths:
        by_dir.setdefault(path.parent, {})[path.name] = path
    for directory, names in sorted(by_dir.items()):
        if "approvals.csv" in names:
            instance = load_instance(
                names["approvals.csv"],
                k,
                groups_path=names.get("groups.csv"),
                scores_path=names.get("scores.csv"),
                mode="binary",
            )
            instances[directory.name] = instance
    for path in paths:
        if path.suffix.lower() != ".csv" or path.name in (
            "approvals.csv",
            "groups.csv",
            "scores.csv",
        ):
            continue
        matrix = _try_probability_matrix(path)
        if matrix is None:
            continue
        approvals = threshold_probabilistic_approvals(matrix, cutoff)
        try:
            profile = ApprovalProfile(approvals, len(matrix[0]))
            instances[path.stem] = Instance(profile, k)
        except ValidationError:
            continue
    return instances


def _try_probability_matrix(path: Path):
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or len(header) < 2:
                return None
            matrix = []
            for row in reader:
                if not row:
                    continue
                values = [float(cell) for cell in row[1:]]
                if any(not 0.0 <= v <= 1.0 for v in values):
                    return None
                matrix.append(values)
    except (OSError, ValueError):
        return None
    if not matrix or any(len(row) != len(matrix[0]) for row in matrix):
        return None
    return matrix
