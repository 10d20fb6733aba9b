"""Real-network fixtures and lookup.

Only the karate club network is shipped with the package (it is small
and freely redistributable). The other benchmark networks are loaded
from a user-supplied data directory; see the README for where to obtain
them and the expected file format. Missing files raise
DatasetMissingError so callers can skip with a notice.
"""

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import load_edge_list

__all__ = ["DatasetInfo", "DATASETS", "DatasetMissingError", "dataset_path",
           "load_dataset"]


class DatasetMissingError(FileNotFoundError):
    """A named dataset file could not be found."""


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    filename: str
    indexing: str
    n_communities: int  # conventional community count; None when unknown
    packaged: bool
    description: str


DATASETS = {
    "karate": DatasetInfo(
        name="karate",
        filename="karate.edges",
        indexing="one-based",
        n_communities=2,
        packaged=True,
        description="Zachary's karate club friendships (34 nodes, 78 edges)",
    ),
    "dolphin": DatasetInfo(
        name="dolphin",
        filename="dolphin.edges",
        indexing="one-based",
        n_communities=2,
        packaged=False,
        description="Doubtful Sound bottlenose dolphin associations "
        "(62 nodes, 159 edges; Lusseau et al. 2003)",
    ),
    "football": DatasetInfo(
        name="football",
        filename="football.edges",
        indexing="one-based",
        n_communities=11,
        packaged=False,
        description="NCAA Division I games, 2000 season "
        "(Girvan & Newman 2002)",
    ),
    "foodweb": DatasetInfo(
        name="foodweb",
        filename="foodweb.edges",
        indexing="one-based",
        n_communities=None,
        packaged=False,
        description="Chesapeake Bay summer food web, undirected "
        "(33 organisms, 71 edges; Baird & Ulanowicz 1989)",
    ),
    "trade": DatasetInfo(
        name="trade",
        filename="trade.edges",
        indexing="one-based",
        n_communities=3,
        packaged=False,
        description="International trade among 58 countries, thresholded at "
        "the median symmetrized volume (Westveld & Hoff 2011)",
    ),
}


def dataset_path(name, data_dir=None):
    """Resolve a dataset name to a file path.

    Looks in ``data_dir`` first (when given), then in the package data
    for shipped fixtures.
    """
    try:
        info = DATASETS[name]
    except KeyError:
        raise ValueError(
            f"unknown dataset {name!r}; choose from {sorted(DATASETS)}"
        ) from None
    if data_dir is not None:
        candidate = Path(data_dir) / info.filename
        if candidate.exists():
            return candidate
    if info.packaged:
        packaged = resources.files("netgof").joinpath("data", info.filename)
        if packaged.is_file():
            return Path(str(packaged))
    raise DatasetMissingError(
        f"dataset {name!r} not found"
        + (f" in {data_dir}" if data_dir is not None else "")
        + f"; supply {info.filename} (see README for sources)"
    )


def load_dataset(name, data_dir=None):
    """Load a named dataset as an adjacency matrix."""
    path = dataset_path(name, data_dir=data_dir)
    return load_edge_list(str(path), indexing=DATASETS[name].indexing)
