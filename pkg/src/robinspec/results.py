"""Eigenvalue records and their CSV form."""
import csv
from dataclasses import dataclass, field, replace
import io

RADIAL_EXACT = "RadialExact"
FEM2D = "FEM2D"
MODEL1D = "Model1D"

BASE_COLUMNS = ("domain_id", "alpha", "j", "E", "method", "err_est")


@dataclass(frozen=True)
class SpectralResult:
    domain_id: str
    alpha: float
    j: int
    E: float
    method: str
    err_est: float = 0.0
    disc: dict = field(default_factory=dict, compare=True, hash=False)
    l: int | None = None
    multiplicity: int | None = None
    flag: str = ""

    def with_flag(self, flag):
        return replace(self, flag=flag)


def fmt(x):
    """Shortest round-trip text for floats; plain str otherwise."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _parse_scalar(text):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def result_columns(results):
    cols = list(BASE_COLUMNS)
    extra = []
    if any(r.l is not None for r in results):
        extra += ["l", "multiplicity"]
    for r in results:
        for key in r.disc:
            if key not in extra:
                extra.append(key)
    return cols + extra + ["flag"]


def results_to_csv(results):
    results = list(results)
    cols = result_columns(results)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in results:
        row = []
        for c in cols:
            if c in BASE_COLUMNS or c in ("l", "multiplicity", "flag"):
                v = getattr(r, c)
            else:
                v = r.disc.get(c)
            row.append("" if v is None else fmt(v))
        w.writerow(row)
    return buf.getvalue()


def results_from_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for row in rows:
        missing = [c for c in BASE_COLUMNS if c not in row]
        if missing:
            raise ValueError(f"CSV lacks columns {missing}")
        disc = {}
        for key, val in row.items():
            if key in BASE_COLUMNS or key in ("l", "multiplicity", "flag"):
                continue
            parsed = _parse_scalar(val)
            if parsed is not None:
                disc[key] = parsed
        l = _parse_scalar(row.get("l", ""))
        m = _parse_scalar(row.get("multiplicity", ""))
        out.append(SpectralResult(
            domain_id=row["domain_id"], alpha=float(row["alpha"]), j=int(row["j"]),
            E=float(row["E"]), method=row["method"], err_est=float(row["err_est"]),
            disc=disc, l=l, multiplicity=m, flag=row.get("flag", "") or ""))
    return out


def curve(results, j):
    """(alphas, energies, err_ests) for index ``j``, sorted by alpha."""
    pts = sorted((r.alpha, r.E, r.err_est) for r in results if r.j == j)
    return [p[0] for p in pts], [p[1] for p in pts], [p[2] for p in pts]
