# integral of f(x,u0,v0,w0,u1,v1) subject to w' = F(x,u0,v0,w0,u1,v1)
[independent] x
[chain]
u
v
[function]
F arity=6
f arity=6
[coordinate] w level=0 deriv=F(x,u[0],v[0],w,u[1],v[1])
[named]
constraint = F(x,u[0],v[0],w,u[1],v[1])
lagrangian = f(x,u[0],v[0],w,u[1],v[1])
a = dF[3](x,u[0],v[0],w,u[1],v[1]) - dF[6,1](x,u[0],v[0],w,u[1],v[1]) - u[1]*dF[6,2](x,u[0],v[0],w,u[1],v[1]) - v[1]*dF[6,3](x,u[0],v[0],w,u[1],v[1]) - F(x,u[0],v[0],w,u[1],v[1])*dF[6,4](x,u[0],v[0],w,u[1],v[1]) - u[2]*dF[6,5](x,u[0],v[0],w,u[1],v[1]) - v[2]*dF[6,6](x,u[0],v[0],w,u[1],v[1]) + dF[4](x,u[0],v[0],w,u[1],v[1])*dF[6](x,u[0],v[0],w,u[1],v[1])
[assume_nonzero] a
