"""Finding Torelli elements, and the command-line surface.

torelli_search walks products of catalog classes breadth-first and keeps
those acting trivially on first homology.  Transvections alone do not
get there at short lengths; throwing the two genuine Torelli classes
into the alphabet finds elements immediately.
"""

import subprocess
import sys

from torelli.words import catalog, torelli_search, format_word, h_action

cat = catalog(2)

only_transvections = torelli_search(2, [cat["t1"], cat["u1"], cat["t2"], cat["u2"]], 4, 3)
print("transvections only, length <= 4:", len(only_transvections), "found")

found = torelli_search(2, list(cat.values()), 2, 4)
print("full catalog, length <= 2:", len(found), "found")
for rep in found:
    eye = all(
        h_action(rep)[i][j] == (1 if i == j else 0) for i in range(4) for j in range(4)
    )
    print(f"  {rep.name or '?':24s} trivial on H1: {eye}")
    print(f"    a1 -> {format_word(rep.images[0])}")
print()

# the same functionality is scriptable; every command emits sorted JSON
# so identical inputs give byte-identical output
cmds = [
    [sys.executable, "-m", "torelli.cli", "hall-dims", "--n", "4", "--class", "3"],
    [sys.executable, "-m", "torelli.cli", "log", "--g", "2", "--k", "3",
     "--word", "a1 b1 a1^-1 b1^-1"],
    [sys.executable, "-m", "torelli.cli", "search-torelli", "--g", "2",
     "--max-length", "2", "--count", "2"],
]
for cmd in cmds:
    print("$", " ".join(cmd[2:]))
    out = subprocess.run(cmd, capture_output=True, text=True)
    print("\n".join("  " + line for line in out.stdout.splitlines()))
    print()
