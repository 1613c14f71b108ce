def f():
    return 1  # crlf

class K:
    pass
