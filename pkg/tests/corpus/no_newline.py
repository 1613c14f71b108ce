x = 1
y = x >= 2 and x != 3
z = "a >= b"
f = lambda q: q -> 1 if False else None