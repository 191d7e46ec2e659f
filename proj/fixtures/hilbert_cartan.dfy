# u'' = F(v')
[independent] x
[chain] v
[function] F arity=1
[coordinate]
u0 level=0 deriv=u1
u1 level=1 deriv=F(v[1])
[assume_nonzero] dF[1](v[1])
