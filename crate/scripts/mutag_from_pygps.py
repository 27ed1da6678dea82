"""Convert the MUTAG copy shipped with pyGPs (Demo/GraphData/graphData/MUTAG.npz)
into TUDataset text files.

usage: python3 mutag_from_pygps.py path/to/MUTAG.npz out_dir

pyGPs numbers atom types 1..7 in a different order than TUDataset; they are
mapped back to the TUDataset ids (0 C, 1 N, 2 O, 3 F, 4 I, 5 Cl, 6 Br) by
matching class frequencies.
"""
import os
import sys

import numpy as np

PYGPS_TO_TU = {3: 0, 6: 1, 7: 2, 5: 3, 2: 4, 4: 5, 1: 6}


def main(src, out):
    d = np.load(src)
    indptr, indices = d["adj_indptr"], d["adj_indice"]
    n = len(indptr) - 1
    gi = d["graph_ind"].ravel().astype(int)
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "MUTAG_A.txt"), "w") as f:
        for u in range(n):
            for v in sorted(indices[indptr[u]:indptr[u + 1]]):
                f.write(f"{u + 1}, {v + 1}\n")
    with open(os.path.join(out, "MUTAG_graph_indicator.txt"), "w") as f:
        f.writelines(f"{g}\n" for g in gi)
    with open(os.path.join(out, "MUTAG_node_labels.txt"), "w") as f:
        f.writelines(f"{PYGPS_TO_TU[int(x)]}\n" for x in d["responses"].ravel())
    with open(os.path.join(out, "MUTAG_graph_labels.txt"), "w") as f:
        f.writelines(f"{int(x)}\n" for x in d["labels"].ravel())


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
