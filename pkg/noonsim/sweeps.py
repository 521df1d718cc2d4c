"""
Sweeps over the coherent amplitude and the files they produce

All numbers are computed first (possibly in a process pool) and only then
written, from a single writer, with a fixed 12-significant-digit format so that
identical flags give byte-identical files.
"""
import csv
import logging
import os
from dataclasses import dataclass
from functools import partial

import jinja2
import numpy as np

from .beamsplitter import BALANCED_GAMMA
from .fock import DomainError, EmptyBlockError
from .postselect import matching_parity, postselect
from .search import Pairing, best_squeeze
from .states import CatParity, Family, InputFamily, build_input
from .utils import check_output_path, format_number, parallel_map, validate_grid

log = logging.getLogger("noonsim")

CSV_HEADER = ("family", "N", "alpha_mag", "fidelity", "overlap", "block_probability")
FIG1_PHOTON_NUMBERS = (2, 4, 6, 8)
FIG1_ALPHA_MAX = 2.2
FIG1_ALPHA_STEP = 0.05

GNUPLOT_TEMPLATE = r"""# Overlap of NOON(N) with the post-selected beam-splitter output
# cat-CS dashed, SV-CS continuous
set terminal {{ terminal }}
set output "{{ image }}"
set multiplot layout 2,2
set xlabel "|alpha|"
set ylabel "overlap"
set key top right
{% for panel in panels -%}
set title "N = {{ panel.total_n }}"
plot "{{ data }}" index {{ loop.index0 }} using 1:2 with lines dashtype 2 title "{{ panel.cat_family.value | upper }}", \
     "{{ data }}" index {{ loop.index0 }} using 1:3 with lines title "SV-CS"
{% endfor -%}
unset multiplot
"""


@dataclass(frozen=True)
class SweepRecord:
    """One (family, N, |alpha|) point; `amplitude` is r or |beta| and is not
    written to the CSV"""

    family: Family
    total_n: int
    alpha_mag: float
    fidelity: float
    overlap: float
    block_probability: float
    amplitude: float = 0.0

    def as_row(self):
        return [
            self.family.value,
            str(self.total_n),
            format_number(self.alpha_mag),
            format_number(self.fidelity),
            format_number(self.overlap),
            format_number(self.block_probability),
        ]


def _sweep_input(tag, total_n, alpha_mag, gamma, pairing, squeeze, n_max):
    n_max = n_max or total_n
    if tag is Family.SV_CS:
        if pairing is Pairing.FIXED:
            r = squeeze
        else:
            r, _ = best_squeeze(alpha_mag, total_n, gamma, pairing, n_max)
        return r, build_input(InputFamily.sv_cs(r, alpha_mag), n_max=n_max)
    # cat families are phase locked to alpha = i beta with |beta| = |alpha|
    family = InputFamily(tag, alpha_mag, 1j * alpha_mag)
    return alpha_mag, build_input(family, n_max=n_max)


def evaluate_record(
    point, gamma=BALANCED_GAMMA, pairing=Pairing.FIDELITY, squeeze=None, n_max=None
):
    """The SweepRecord of one (family, N, |alpha|) point

    A point without an N-photon component (the cats at |alpha| = 0, vacuum
    inputs) records zeros.
    """
    tag, total_n, alpha_mag = point
    zero = SweepRecord(tag, total_n, alpha_mag, 0.0, 0.0, 0.0)
    if tag is not Family.SV_CS and alpha_mag == 0:
        return zero
    amplitude, state = _sweep_input(
        tag, total_n, alpha_mag, gamma, pairing, squeeze, n_max
    )
    try:
        result = postselect(state, total_n, gamma)
    except EmptyBlockError:
        return SweepRecord(tag, total_n, alpha_mag, 0.0, 0.0, 0.0, amplitude)
    return SweepRecord(
        family=tag,
        total_n=total_n,
        alpha_mag=alpha_mag,
        fidelity=result.fidelity,
        overlap=result.overlap_with_ideal,
        block_probability=result.block_probability,
        amplitude=amplitude,
    )


def check_photon_numbers(photon_numbers):
    photon_numbers = list(photon_numbers)
    if not photon_numbers:
        raise DomainError("At least one photon number N is required")
    for total_n in photon_numbers:
        if int(total_n) != total_n or total_n < 2 or total_n % 2:
            raise DomainError(
                "Sweeps compare against the ideal input, which needs an even "
                "N >= 2, got {}".format(total_n)
            )
    return [int(n) for n in photon_numbers]


def check_alpha_grid(alpha_grid):
    grid = np.asarray(alpha_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("The |alpha| grid must be a nonempty list of values")
    if not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise DomainError("The |alpha| grid must hold finite nonnegative values")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("The |alpha| grid must be strictly ascending")
    return [float(a) for a in grid]


def sweep(
    families,
    photon_numbers,
    alpha_grid,
    gamma=BALANCED_GAMMA,
    pairing=Pairing.FIDELITY,
    squeeze=None,
    jobs=1,
    n_max=None,
):
    """One SweepRecord per (family, N, |alpha|), in that nesting order"""
    families = [Family.parse(f) for f in families]
    if not families:
        raise DomainError("At least one input family is required")
    photon_numbers = check_photon_numbers(photon_numbers)
    alpha_grid = check_alpha_grid(alpha_grid)
    pairing = Pairing(pairing)
    if pairing is Pairing.FIXED and Family.SV_CS in families:
        if squeeze is None or not squeeze >= 0:
            raise DomainError("A fixed SV-CS pairing needs a squeeze r >= 0")
    if n_max is not None and n_max < max(photon_numbers):
        raise DomainError(
            "n_max={} cannot hold the N={} photon block".format(
                n_max, max(photon_numbers)
            )
        )
    points = [
        (tag, total_n, alpha_mag)
        for tag in families
        for total_n in photon_numbers
        for alpha_mag in alpha_grid
    ]
    log.info(
        "Sweeping %d points (%s; N=%s)",
        len(points),
        ", ".join(f.value for f in families),
        ",".join(str(n) for n in photon_numbers),
        extra=dict(phase="sweeping"),
    )
    return parallel_map(
        partial(
            evaluate_record,
            gamma=complex(gamma),
            pairing=pairing,
            squeeze=squeeze,
            n_max=n_max,
        ),
        points,
        jobs,
    )


def write_csv(records, path):
    """UTF-8, LF terminated CSV with the fixed SweepRecord header"""
    path = check_output_path(path)
    log.info("Writing %s", path, extra=dict(phase="writing"))
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.as_row())
    return path


@dataclass(frozen=True)
class Fig1Panel:
    total_n: int
    cat_family: Family
    alpha_mags: tuple
    cat_overlap: tuple
    sv_overlap: tuple

    @property
    def cat_peak(self):
        """|alpha| at which the cat-CS overlap is largest"""
        return self.alpha_mags[int(np.argmax(self.cat_overlap))]

    def rows(self):
        for values in zip(self.alpha_mags, self.cat_overlap, self.sv_overlap):
            yield [format_number(v) for v in values]


@dataclass(frozen=True)
class Fig1Output:
    panels: tuple
    panel_paths: tuple
    records_path: str
    data_path: str
    script_path: str


def cat_family_for(total_n):
    """The cat family whose parity suits N (even cat for N = 0 mod 4)"""
    if matching_parity(total_n) is CatParity.EVEN:
        return Family.ECS_CS
    return Family.OCS_CS


def fig1_panels(
    alpha_grid=None,
    photon_numbers=FIG1_PHOTON_NUMBERS,
    gamma=BALANCED_GAMMA,
    pairing=Pairing.FIDELITY,
    squeeze=None,
    jobs=1,
    n_max=None,
):
    """Cat-CS against SV-CS overlap curves, one panel per N, with their records"""
    if alpha_grid is None:
        alpha_grid = validate_grid(0.0, FIG1_ALPHA_MAX, FIG1_ALPHA_STEP)
    alpha_grid = check_alpha_grid(alpha_grid)
    photon_numbers = check_photon_numbers(photon_numbers)
    panels = []
    records = []
    for total_n in photon_numbers:
        cat_family = cat_family_for(total_n)
        cat = sweep([cat_family], [total_n], alpha_grid, gamma, jobs=jobs, n_max=n_max)
        sv = sweep(
            [Family.SV_CS], [total_n], alpha_grid, gamma, pairing, squeeze, jobs, n_max
        )
        records.extend(cat)
        records.extend(sv)
        panels.append(
            Fig1Panel(
                total_n=total_n,
                cat_family=cat_family,
                alpha_mags=tuple(alpha_grid),
                cat_overlap=tuple(r.overlap for r in cat),
                sv_overlap=tuple(r.overlap for r in sv),
            )
        )
    return panels, records


def write_fig1(panels, records, output_dir, terminal="pngcairo size 1000,800"):
    """Panel CSVs, the combined record CSV, gnuplot data and script"""
    output_dir = check_output_path(output_dir, directory=True)
    panel_paths = []
    for panel in panels:
        path = os.path.join(output_dir, "fig1_N{}.csv".format(panel.total_n))
        log.info("Writing %s", path, extra=dict(phase="writing"))
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["alpha_mag", panel.cat_family.value, Family.SV_CS.value])
            writer.writerows(panel.rows())
        panel_paths.append(path)

    records_path = write_csv(records, os.path.join(output_dir, "fig1_records.csv"))

    data_path = os.path.join(output_dir, "fig1.dat")
    with open(data_path, "w", encoding="utf-8", newline="\n") as f:
        for i, panel in enumerate(panels):
            if i:
                # two blank lines separate gnuplot data sets
                f.write("\n\n")
            f.write(
                "# N={} alpha_mag {} {}\n".format(
                    panel.total_n, panel.cat_family.value, Family.SV_CS.value
                )
            )
            for row in panel.rows():
                f.write(" ".join(row) + "\n")

    script_path = os.path.join(output_dir, "fig1.gp")
    script = jinja2.Template(GNUPLOT_TEMPLATE).render(
        panels=panels,
        data=os.path.basename(data_path),
        image="fig1.png",
        terminal=terminal,
    )
    with open(script_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(script)
    return Fig1Output(
        panels=tuple(panels),
        panel_paths=tuple(panel_paths),
        records_path=records_path,
        data_path=data_path,
        script_path=script_path,
    )


def reproduce_fig1(output_dir, alpha_grid=None, **kwargs):
    """Compute and write every file behind the overlap figure"""
    output_dir = check_output_path(output_dir, directory=True)
    panels, records = fig1_panels(alpha_grid, **kwargs)
    return write_fig1(panels, records, output_dir)
