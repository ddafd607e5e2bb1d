"""
Scanning the counting lemmas
============================

The identities are checked cell by cell.  The first few must hold everywhere;
the last ones are treated as open claims and may report counterexamples.
"""
from twinsieve import check_identity, default_grid, scan_grid

print(check_identity("L4_1", {"p": 5, "m": 25}))
print(check_identity("EQ3_4", {"p": 7, "m1": 4, "m2": 4}).diagnostics)

for tag in ("EQ3_2", "EQ3_4", "L4_1", "L4_2", "L4_4"):
    r = scan_grid(tag, default_grid(tag))
    print(f"{tag}: {r.cells_checked} cells, {len(r.violations)} violations, {r.wall_time:.2f} s")

report = scan_grid("L4_5", default_grid("L4_5", pmax=23))
print(f"L4_5 (p_j <= 23): {report.cells_checked} cells, {len(report.violations)} violations")
for line in report.csv()[:4]:
    print(line)
