# one unknown function
[independent] x
[chain] u
[named]
lagrangian = u[1]^2/2
