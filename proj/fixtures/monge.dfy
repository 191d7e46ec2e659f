# dw/dx = F(du/dx, dv/dx)
[independent] x
[chain]
u
v
[function] F arity=2
[coordinate] w level=0 deriv=F(u[1],v[1])
