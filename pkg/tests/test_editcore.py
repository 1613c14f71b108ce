from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folio.editcore import (
    KILL_RING_SIZE,
    Buffer,
    Delete,
    EditRecord,
    Motion,
    ParseError,
    PasteAfter,
    PasteBefore,
    Undo,
    apply_command,
    apply_script,
    motion_target,
    parse_script,
    rect_cut,
    rect_paste,
)

FOX = "The quick brown fox jumps over the lazy dog."
DOG = "The quick lazy dog jumps over the brown fox."


def test_parse_fox_script():
    assert parse_script("2wd2w3wPd3w6bep") == [
        Motion("w", 2),
        Delete("w", 2),
        Motion("w", 3),
        PasteBefore(),
        Delete("w", 3),
        Motion("b", 6),
        Motion("e", 1),
        PasteAfter(),
    ]


def test_parse_edges():
    assert parse_script("") == []
    assert parse_script("2d3w") == [Delete("w", 6)]
    assert parse_script("3u") == [Undo()] * 3
    assert parse_script("12e") == [Motion("e", 12)]


@pytest.mark.parametrize("script,pos", [("d", 1), ("2", 1), ("x", 0), ("w0w", 1), ("dq", 1), ("2d3", 3)])
def test_parse_errors(script, pos):
    with pytest.raises(ParseError) as info:
        parse_script(script)
    assert info.value.position == pos


def test_motions():
    assert motion_target(Buffer(FOX), "w", 2) == 10
    assert motion_target(Buffer("dog."), "w", 1) == 3
    for kind in "wbe":
        assert motion_target(Buffer(""), kind, 3) == 0
    assert motion_target(Buffer("ab cd", cursor=4), "b", 1) == 3
    assert motion_target(Buffer("ab cd", cursor=3), "b", 1) == 0
    assert motion_target(Buffer("ab cd"), "e", 1) == 1
    assert motion_target(Buffer("ab cd", cursor=1), "e", 1) == 4
    assert motion_target(Buffer("a\nb"), "w", 1) == 2
    assert motion_target(Buffer("ab"), "w", 5) == 2


def test_motion_never_edits():
    buf = Buffer(FOX)
    for cmd in parse_script("3w2be5b9w"):
        apply_command(buf, cmd)
        assert buf.text == FOX
    assert buf.history == []


def test_delete_and_paste():
    buf = apply_script(Buffer("hello world"), "dw")
    assert buf.text == "world" and buf.kill_ring[0] == "hello "
    apply_script(buf, "P")
    assert buf.text == "hello world"


def test_delete_back_and_end():
    buf = apply_script(Buffer("ab cd ef", cursor=6), "db")
    assert (buf.text, buf.cursor, buf.kill_ring[0]) == ("ab ef", 3, "cd ")
    buf = apply_script(Buffer("ab cd ef"), "de")
    assert (buf.text, buf.kill_ring[0]) == (" cd ef", "ab")


def test_paste_after_empty_buffer():
    buf = Buffer("")
    buf.kill_ring.appendleft("xyz")
    apply_command(buf, PasteAfter())
    assert (buf.text, buf.cursor) == ("xyz", 2)


def test_fox():
    assert apply_script(Buffer(FOX), "2wd2w3wPd3w6bep").text == DOG
    assert apply_script(Buffer(FOX), "").text == FOX


def test_undo_examples():
    assert apply_script(Buffer("hello world"), "dwu").text == "hello world"
    assert apply_script(Buffer("hello world"), "dwuwu").text == "world"
    assert apply_script(Buffer("hello world"), "dwuu").text == "hello world"


def test_warnings():
    buf = apply_script(Buffer("abc"), "P")
    assert buf.warning and buf.text == "abc"
    buf = apply_script(Buffer("abc"), "u")
    assert buf.warning and buf.text == "abc"


def test_record_inverse():
    rec = EditRecord("delete", 1, "bc", 1, 1)
    assert rec.inverse().apply(rec.apply("abcd")) == "abcd"
    with pytest.raises(ValueError):
        EditRecord("delete", 0, "zz", 0, 0).apply("abcd")


def test_kill_ring_bound():
    buf = Buffer(" ".join(f"w{i}" for i in range(40)))
    apply_script(buf, "dw" * 30)
    assert len(buf.kill_ring) == KILL_RING_SIZE
    assert buf.kill_ring[0] == "w29 "
    assert buf.kill_ring[-1] == "w14 "


def test_rect_cut_examples():
    buf, rect = rect_cut(Buffer("abc\ndef"), (0, 1), (1, 1))
    assert (buf.lines, rect) == (["ac", "df"], ["b", "e"])
    buf, rect = rect_cut(Buffer("abc"), (0, 2), (0, 2))
    assert (buf.text, rect) == ("ab", ["c"])
    buf, rect = rect_cut(Buffer("abcdef\nab"), (0, 3), (1, 4))
    assert (buf.lines, rect) == (["abcf", "ab"], ["de", ""])
    with pytest.raises(IndexError):
        rect_cut(Buffer("a"), (0, 0), (1, 0))


def test_rect_paste_examples():
    buf = rect_paste(Buffer("ab"), (0, 3), ["x", "y"])
    assert buf.lines == ["ab x", "   y"]
    buf = rect_paste(Buffer("abc"), (0, 0), [])
    assert buf.text == "abc" and buf.history == []
    buf = Buffer("abc\ndef")
    buf, rect = rect_cut(buf, (0, 1), (1, 1))
    assert rect_paste(buf, (0, 1), rect).text == "abc\ndef"
    assert apply_script(buf, "u").text == "ac\ndf"
    assert apply_script(buf, "u").text == "abc\ndef"


def test_rect_undo_is_one_step():
    buf, _ = rect_cut(Buffer("abc\ndef\nghi"), (0, 0), (2, 1))
    assert buf.text == "c\nf\ni"
    assert apply_script(buf, "u").text == "abc\ndef\nghi"


WORDS = st.lists(st.sampled_from(["foo", "bar_1", ".", ",", "(x)", " ", "  ", "\n", "é"]), max_size=25).map("".join)
NO_UNDO = st.lists(
    st.tuples(st.integers(1, 3), st.sampled_from(["w", "b", "e", "dw", "db", "de", "P", "p"])), max_size=12
).map(lambda cmds: "".join(f"{n}{c}" for n, c in cmds))


@settings(max_examples=300, deadline=None)
@given(WORDS, st.integers(0, 30), NO_UNDO)
def test_full_undo_restores(text, cursor, script):
    buf = apply_script(Buffer(text, cursor=cursor), script)
    apply_script(buf, "u" * len(buf.history))
    assert buf.text == text


@settings(max_examples=300, deadline=None)
@given(WORDS, st.integers(0, 30), NO_UNDO, st.sampled_from(["dw", "db", "de", "P", "p", "2dw"]))
def test_redo_pattern(text, cursor, prefix, x):
    buf = apply_script(Buffer(text, cursor=cursor), prefix)
    after = apply_script(Buffer(buf.text, buf.cursor, buf.kill_ring), x).text
    apply_script(buf, x + "uwu")
    assert buf.text == after


@settings(max_examples=300, deadline=None)
@given(WORDS, st.integers(0, 30), st.text(alphabet="wbedPpu123", max_size=20))
def test_cursor_and_ring_bounds(text, cursor, script):
    try:
        commands = parse_script(script)
    except ParseError:
        return
    buf = Buffer(text, cursor=cursor)
    for cmd in commands:
        apply_command(buf, cmd)
        assert 0 <= buf.cursor <= max(0, len(buf.text) - 1)
        assert len(buf.kill_ring) <= KILL_RING_SIZE


LINES = st.lists(st.text(alphabet="abc xyz", max_size=8), min_size=1, max_size=6).map("\n".join)


@settings(max_examples=300, deadline=None)
@given(LINES, st.data())
def test_rect_round_trip(text, data):
    n = text.count("\n") + 1
    l0 = data.draw(st.integers(0, n - 1))
    l1 = data.draw(st.integers(l0, n - 1))
    c0 = data.draw(st.integers(0, 9))
    c1 = data.draw(st.integers(c0, 12))
    buf, rect = rect_cut(Buffer(text), (l0, c0), (l1, c1))
    assert len(rect) == l1 - l0 + 1
    assert rect_paste(buf, (l0, c0), rect).text == text
