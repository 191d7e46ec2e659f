[independent] x
[chain]
w1
w2
