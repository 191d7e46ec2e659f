# w1_2 = w2_2 = 0 inside the jet space with two chains
[independent] x
[coordinate]
a1 level=0 deriv=b1
b1 level=1 deriv=0
a2 level=0 deriv=b2
b2 level=1 deriv=0
