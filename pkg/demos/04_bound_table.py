"""
The W(V) sequence and the D'(n) lower bound
===========================================
"""
from twinsieve import figure_table, w_growth_check, w_value
from twinsieve.bounds import fixed

w5 = w_value(5)
print("W(5) =", w5, "=", fixed(w5, 4))
print("W(6) =", w_value(6))

# each step W(V) -> W(V+1) reduces to an integer inequality
for V in range(5, 10):
    g = w_growth_check(V)
    print(V, g.holds, "witness", g.witness)

print("v  p_v      n  d_prime  d_actual  ratio")
for r in figure_table(3, 30):
    ratio = "" if r.ratio is None else fixed(r.ratio, 2)
    print(f"{r.v:<2} {r.p_v:>3} {r.n:>6} {r.d_prime:>8} {r.d_actual:>9}  {ratio}")
