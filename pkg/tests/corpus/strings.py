s1 = 'single'
s2 = "double with # not a comment"
s3 = b"bytes"
s4 = rb'raw bytes \d+'
s5 = f"formatted {s1!r}"
doc = """
Triple quoted,
spanning lines.  # still string
"""
t = '''another
one'''
bad = "unterminated
after = 2
