"""Compare the four kills-weights methods on a handful of maps.

The Ext map is zero on homology but not nullhomotopic, so homology alone
cannot settle it. All four methods must return the same verdict.
"""

from weightkit import ChainMap, Complex, ZZ, kills_weights
from weightkit.complexes import is_nullhomotopic

T = Complex.two_term(ZZ, 0, [[2]])
T_up = Complex.two_term(ZZ, -1, [[2]])

maps = {
    "id on Z->2Z": ChainMap.identity(T),
    "2 * id on Z->2Z": ChainMap(T, T, {0: [[2]], 1: [[2]]}),
    "Ext map T -> T[1]": ChainMap(T, T_up, {0: [[1]]}),
}

for name, g in maps.items():
    print(f"{name}: nullhomotopic {is_nullhomotopic(g)}")
    for win in ((0, 0), (-1, 0), (0, 1), (1, 1)):
        v = kills_weights(g, win, "all")
        print(f"  kills weights {list(win)}: {v.verdict}  [{v.summary()}]")
