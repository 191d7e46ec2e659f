# u'' = (v')^(1/2), the square root as a symbol with S' = S/(2 #1)
[independent] x
[chain] v
[function] S arity=1 derivative(1)=S(#1)/(2*#1)
[coordinate]
u0 level=0 deriv=u1
u1 level=1 deriv=S(v[1])
[assume_nonzero]
S(v[1])
v[1]
