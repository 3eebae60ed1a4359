"""Hall bases of free Lie algebras, indexed by Lyndon words.

The basis for nilpotency class c is literally a prefix of the basis for
class c+1, which is what makes truncation-level bookkeeping trivial
everywhere else in the package.
"""

from torelli.hall import get_basis, lie_generator

basis = get_basis(2, 5)
print("free Lie algebra on 2 letters, class 5")
print("per-weight dimensions:", basis.dims)
print()

print("the basis elements through weight 3:")
for i in range(sum(basis.dims[:3])):
    print(f"  [{i:2d}] weight {basis.weight_of(i)}  {basis.name(i)}")
print()

# brackets expand back over the basis with integer coefficients
x, y = lie_generator(basis, 1), lie_generator(basis, 2)
xy = x.bracket(y)
print("[x1, x2] =", xy)
print("[[x1, x2], x1] =", xy.bracket(x))
print("[x1, [x1, x2]] =", x.bracket(xy))
print()

# antisymmetry and Jacobi, exactly
z = xy.bracket(y)
assert x.bracket(y) + y.bracket(x) == lie_generator(basis, 1).scale(0)
jacobi = x.bracket(y.bracket(z)) + y.bracket(z.bracket(x)) + z.bracket(x.bracket(y))
assert not jacobi
print("antisymmetry and Jacobi hold on the nose; brackets past the class just vanish:")
deep = x
for _ in range(5):
    deep = deep.bracket(y)
print("  six-fold bracket in class 5:", deep)

big = get_basis(4, 3)
print()
print("four letters, class 3: dims", big.dims, "- total", big.dim)
