"""The structured input format and its parser.

A job file is a sequence of sections:

    [field]        one line: QQ or F<p>
    [variables]    one line per variable: name weight
    [relations]    one polynomial per line (may be empty)
    [module]       ideal: f, g, ...          cyclic quotient R/(f, g, ...)
                   ideal-module: f, g, ...   the ideal itself as a module
                   matrix R C                presentation matrix, then
                   shifts: s1, ..., sR       (optional target shifts)
                   row: e1, ..., eC          (R rows)
    [task]         task name, then key = value parameters

Tasks: resolve, minors, periodicity, shamash, mf, golod, diagnostics.
Parameters: rank, cutoff, pmax, slice-degree, format, exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import FreeMap
from .ring import RingSpec

TASKS = ("resolve", "minors", "periodicity", "shamash", "mf", "golod", "diagnostics")

DEFAULTS = {"cutoff": 10, "rank": 1, "pmax": 4, "format": "table", "exhaustive": False}


class JobSpecError(ValueError):
    pass


@dataclass
class JobSpec:
    field_name: str
    variables: list  # [(name, weight)]
    relations: list  # [str]
    module_kind: str  # "ideal" | "ideal-module" | "matrix" | "free"
    module_data: dict
    task: str
    params: dict = field(default_factory=dict)

    # ring / module construction ------------------------------------------------

    def ring(self):
        names = [n for n, _ in self.variables]
        weights = [w for _, w in self.variables]
        return RingSpec(self.field_name, names, weights, self.relations)

    def build_module_presentation(self, ring=None):
        from .resolve import presentation_of_cyclic, presentation_of_ideal_module

        ring = ring or self.ring()
        if self.module_kind == "ideal":
            return presentation_of_cyclic(ring, self.module_data["gens"])
        if self.module_kind == "ideal-module":
            return presentation_of_ideal_module(ring, self.module_data["gens"])
        if self.module_kind == "matrix":
            rows = [[ring.parse(e) for e in row] for row in self.module_data["rows"]]
            shifts = self.module_data.get("shifts")
            return FreeMap(ring, rows, tuple(shifts) if shifts else None)
        if self.module_kind == "free":
            rank = self.module_data.get("rank", 1)
            return FreeMap(ring, {}, (0,) * rank, ())
        raise JobSpecError(f"unknown module kind {self.module_kind!r}")

    def param(self, key, default=None):
        if key in self.params:
            return self.params[key]
        if default is not None:
            return default
        return DEFAULTS.get(key)

    # serialization -------------------------------------------------------------

    def to_text(self):
        lines = ["[field]", self.field_name, "", "[variables]"]
        for name, w in self.variables:
            lines.append(f"{name} {w}")
        lines.append("")
        lines.append("[relations]")
        for r in self.relations:
            lines.append(str(r))
        lines.append("")
        lines.append("[module]")
        if self.module_kind in ("ideal", "ideal-module"):
            lines.append(f"{self.module_kind}: " + ", ".join(str(g) for g in self.module_data["gens"]))
        elif self.module_kind == "free":
            lines.append(f"free {self.module_data.get('rank', 1)}")
        else:
            rows = self.module_data["rows"]
            nrows = len(rows)
            ncols = len(rows[0]) if rows else 0
            lines.append(f"matrix {nrows} {ncols}")
            shifts = self.module_data.get("shifts")
            if shifts:
                lines.append("shifts: " + ", ".join(str(s) for s in shifts))
            for row in rows:
                lines.append("row: " + ", ".join(str(e) for e in row))
        lines.append("")
        lines.append("[task]")
        lines.append(self.task)
        for k in sorted(self.params):
            v = self.params[k]
            if isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"


def parse_jobspec(text):
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip().lower()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise JobSpecError(f"content before any section: {stripped!r}")
        sections[current].append(stripped)

    for required in ("field", "variables", "task"):
        if required not in sections:
            raise JobSpecError(f"missing [{required}] section")

    field_lines = sections["field"]
    if len(field_lines) != 1:
        raise JobSpecError("[field] must contain exactly one line")
    field_name = field_lines[0]

    variables = []
    for line in sections["variables"]:
        parts = line.split()
        if len(parts) == 1:
            variables.append((parts[0], 1))
        elif len(parts) == 2:
            variables.append((parts[0], int(parts[1])))
        else:
            raise JobSpecError(f"bad variable line: {line!r}")
    if not variables:
        raise JobSpecError("no variables declared")

    relations = list(sections.get("relations", []))

    module_kind, module_data = "free", {"rank": 1}
    mod_lines = sections.get("module", [])
    if mod_lines:
        head = mod_lines[0]
        if head.startswith("ideal-module:"):
            module_kind = "ideal-module"
            module_data = {"gens": _split_list(head.split(":", 1)[1])}
        elif head.startswith("ideal:"):
            module_kind = "ideal"
            module_data = {"gens": _split_list(head.split(":", 1)[1])}
        elif head.startswith("free"):
            parts = head.split()
            module_kind = "free"
            module_data = {"rank": int(parts[1]) if len(parts) > 1 else 1}
        elif head.startswith("matrix"):
            parts = head.split()
            if len(parts) != 3:
                raise JobSpecError("matrix header must be: matrix <rows> <cols>")
            nrows, ncols = int(parts[1]), int(parts[2])
            shifts = None
            rows = []
            for line in mod_lines[1:]:
                if line.startswith("shifts:"):
                    shifts = [int(s) for s in _split_list(line.split(":", 1)[1])]
                elif line.startswith("row:"):
                    rows.append(_split_list(line.split(":", 1)[1]))
                else:
                    raise JobSpecError(f"bad matrix line: {line!r}")
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise JobSpecError("matrix body does not match the declared shape")
            module_kind = "matrix"
            module_data = {"rows": rows}
            if shifts is not None:
                if len(shifts) != nrows:
                    raise JobSpecError("shifts length must equal the row count")
                module_data["shifts"] = shifts
        else:
            raise JobSpecError(f"unknown module header: {head!r}")

    task_lines = sections["task"]
    task = task_lines[0].strip().lower()
    if task not in TASKS:
        raise JobSpecError(f"unknown task {task!r}; expected one of {TASKS}")
    params = {}
    for line in task_lines[1:]:
        if "=" not in line:
            raise JobSpecError(f"bad task parameter: {line!r}")
        k, v = [s.strip() for s in line.split("=", 1)]
        k = k.replace("-", "_")
        if k in ("cutoff", "rank", "pmax", "slice_degree"):
            params[k] = int(v)
        elif k == "exhaustive":
            params[k] = v.lower() in ("1", "true", "yes")
        else:
            params[k] = v
    return JobSpec(
        field_name=field_name,
        variables=variables,
        relations=relations,
        module_kind=module_kind,
        module_data=module_data,
        task=task,
        params=params,
    )


def _split_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]
