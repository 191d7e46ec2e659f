# constant right-hand side: w - c x is a first integral
[independent] x
[chain]
u
v
[parameter] c
[coordinate] w level=0 deriv=c
