"""Mixed-data embedding and anomaly scoring.

Thin wrapper over the C++ core. The usual flow:

    import famdad
    table = famdad.generate("sim1", seed=7)     # or famdad.load_csv(...)
    emb = famdad.fit(table, weights="wfamd")
    fk = famdad.project(emb, subspace="fl", k=5)
    scores = famdad.spad_scores(fk)
    print(famdad.auc(scores, table.labels))
"""

from ._famdad import (
    Embedding,
    FamdadError,
    MixedTable,
    __version__,
    auc,
    encode_matrix,
    fit,
    generate,
    iso_scores,
    load_csv,
    project,
    run,
    spad_scores,
)

__all__ = [
    "Embedding",
    "FamdadError",
    "MixedTable",
    "__version__",
    "auc",
    "encode_matrix",
    "fit",
    "generate",
    "iso_scores",
    "load_csv",
    "project",
    "run",
    "spad_scores",
]
