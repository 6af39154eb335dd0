#!/usr/bin/env python

from __future__ import annotations

import math
import re
import shlex
import sys
from logging import getLogger
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Tuple, Union

from . import edit_utils, intersect_utils, param_utils
from .path_parsers import parse, parse_point, parse_transform, read_svg
from .path_utils import (
    PathRegistry,
    append,
    concat,
    format_number,
    get_components,
    insert,
    serialize,
)
from .svg_utils import write_svg
from .types import (
    AppendOptions,
    CloseMode,
    Command,
    GapSpec,
    KeepSide,
    PathEnd,
    Point,
    ScriptParseError,
    SoftPathError,
    SvgStyle,
    VerbSpec,
)

###############################################################################

log = getLogger(__name__)

###############################################################################

UNBOUNDED = sys.maxsize

# Flags that take the next token as their value
VALUE_FLAGS = ("transform",)

DEFAULT_COMPONENT_PREFIX = "anonymous"

# 12, 12pt, -1.5e3
NUMBER_RE = re.compile(r"^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(?:pt)?$")

VERBS: Dict[str, VerbSpec] = {
    "load": VerbSpec(2, 2),
    "loadfile": VerbSpec(2, 2),
    "loadsvg": VerbSpec(2, 2),
    "clone": VerbSpec(2, 2),
    "show": VerbSpec(1, 1),
    "reverse": VerbSpec(1, 1),
    "translate": VerbSpec(3, 3),
    "transform": VerbSpec(2, 2),
    "span": VerbSpec(3, 3),
    "splitself": VerbSpec(1, 1),
    "splitwith": VerbSpec(2, 2),
    "splitboth": VerbSpec(2, 2),
    "replacelines": VerbSpec(1, 1),
    "components": VerbSpec(1, 2),
    "gaps": VerbSpec(2, 3),
    "gapsseg": VerbSpec(2, 3),
    "join": VerbSpec(2, 2),
    "joinwith": VerbSpec(2, 3, ("upright",)),
    "joinwithcurve": VerbSpec(1, 2),
    "spotweld": VerbSpec(1, 1),
    "removeempty": VerbSpec(1, 1),
    "remove": VerbSpec(2, 2),
    "open": VerbSpec(1, 1),
    "close": VerbSpec(1, 1),
    "adjustclose": VerbSpec(1, 1),
    "closewith": VerbSpec(2, 2),
    "closewithcurve": VerbSpec(1, 1),
    "splice": VerbSpec(3, 3),
    "shortenstart": VerbSpec(2, 2),
    "shortenend": VerbSpec(2, 2),
    "shortenboth": VerbSpec(2, 2),
    "splitat": VerbSpec(2, 2),
    "splitinto": VerbSpec(4, 4),
    "keepstart": VerbSpec(2, 2),
    "keepend": VerbSpec(2, 2),
    "keepmiddle": VerbSpec(3, 3),
    "append": VerbSpec(2, 2, ("reverse", "move", "weld", "transform")),
    "insert": VerbSpec(2, 2),
    "point": VerbSpec(2, 2),
    "frame": VerbSpec(2, 2, ("upright",)),
    "placeat": VerbSpec(3, 3, ("upright",)),
    "knot": VerbSpec(2, 3, ("draft",)),
    "to": VerbSpec(3, 3),
    "bridge": VerbSpec(5, 5),
    "svg": VerbSpec(1, UNBOUNDED),
}

###############################################################################


def expand_index_list(text: str) -> List[int]:
    """
    Expand a 1-based index list.

    Parameters
    ----------
    text: str
        Comma separated integers, optionally in braces. ``...`` continues the
        arithmetic progression set up by the entries before it up to the entry
        after it, so ``2,4,...,10`` is ``2,4,6,8,10`` and ``1,...,4`` is
        ``1,2,3,4``.

    Returns
    -------
    List[int]
        The indices. An empty string or ``{}`` gives an empty list.

    Raises
    ------
    ValueError
        On a non-integer entry or a progression that cannot reach its end.
    """
    items = [item.strip() for item in text.strip().strip("{}").split(",")]
    items = [item for item in items if item]

    indices: List[int] = []
    for i, item in enumerate(items):
        if item != "...":
            indices.append(int(item))
            continue

        if not indices or i + 1 >= len(items) or items[i + 1] == "...":
            raise ValueError(f"'...' needs a value on both sides in '{text}'")
        step = indices[-1] - indices[-2] if len(indices) > 1 else 1
        stop = int(items[i + 1])
        distance = stop - indices[-1]
        if step == 0 or distance * step < 0 or distance % step:
            raise ValueError(f"Cannot count from {indices[-1]} to {stop} in '{text}'")
        indices.extend(range(indices[-1] + step, stop, step))

    return indices


def parse_command(line: str, line_number: int) -> Optional[Command]:
    """
    Read one script line.

    Returns None for blank and comment lines.

    Raises
    ------
    ScriptParseError
        On an unknown verb, an unknown flag or the wrong number of arguments.
    """
    try:
        tokens = shlex.split(line, comments=True)
    except ValueError as e:
        raise ScriptParseError(line_number, str(e)) from e
    if not tokens:
        return None

    verb, rest = tokens[0].lower(), tokens[1:]
    if verb not in VERBS:
        raise ScriptParseError(line_number, f"Unknown command '{tokens[0]}'")
    spec = VERBS[verb]

    args: List[str] = []
    options: Dict[str, object] = {}
    tokens_left = iter(rest)
    for token in tokens_left:
        if not token.startswith("--"):
            args.append(token)
            continue
        flag = token[2:]
        if flag not in spec.flags:
            raise ScriptParseError(line_number, f"'{verb}' has no option {token}")
        if flag in VALUE_FLAGS:
            value = next(tokens_left, None)
            if value is None:
                raise ScriptParseError(line_number, f"{token} needs a value")
            options[flag] = value
        else:
            options[flag] = True

    if not spec.min_args <= len(args) <= spec.max_args:
        if spec.min_args == spec.max_args:
            expected = str(spec.min_args)
        elif spec.max_args == UNBOUNDED:
            expected = f"at least {spec.min_args}"
        else:
            expected = f"{spec.min_args} to {spec.max_args}"
        raise ScriptParseError(
            line_number, f"'{verb}' takes {expected} arguments, got {len(args)}"
        )

    return Command(verb, tuple(args), options, line_number)


def parse_script(script: str) -> List[Command]:
    """Parse a whole script; nothing runs if any line is malformed."""
    commands = []
    for line_number, line in enumerate(script.splitlines(), start=1):
        command = parse_command(line, line_number)
        if command is not None:
            commands.append(command)
    return commands


class ScriptRunner:
    """
    Runs soft path scripts against a registry of named paths.

    Parameters
    ----------
    out_dir: Union[str, Path]
        Directory that relative output files are written to.
        Default: "."
    output: Optional[TextIO]
        Where ``show``, ``point`` and ``frame`` print.
        Default: None (standard output)

    Notes
    -----
    Commands that fail with a SoftPathError (a missing path, a degenerate span,
    ...) are reported as warnings and the script carries on. Malformed lines
    and file errors stop it.
    """

    def __init__(
        self, out_dir: Union[str, Path] = ".", output: Optional[TextIO] = None
    ):
        self.out_dir = Path(out_dir)
        self.output = output if output is not None else sys.stdout
        self.registry = PathRegistry()

    def run(self, script: str) -> int:
        """
        Run a script.

        Returns
        -------
        int
            0 when every line was read and all files could be accessed, 1
            otherwise.
        """
        try:
            commands = parse_script(script)
        except ScriptParseError as e:
            log.error(str(e))
            return 1

        for command in commands:
            try:
                self.execute(command)
            except ScriptParseError as e:
                log.error(str(e))
                return 1
            except SoftPathError as e:
                log.warning(f"line {command.line_number}: {command.verb}: {e}")
            except OSError as e:
                log.error(f"line {command.line_number}: {e}")
                return 1

        return 0

    def execute(self, command: Command) -> None:
        args = " ".join(command.args)
        log.debug(f"line {command.line_number}: {command.verb} {args}")
        handler = getattr(self, f"_do_{command.verb}")
        handler(command, *command.args)

    # argument conversion

    @staticmethod
    def _number(command: Command, text: str) -> float:
        match = NUMBER_RE.match(text)
        if match is None or not math.isfinite(float(match.group(1))):
            raise ScriptParseError(command.line_number, f"'{text}' is not a number")
        return float(match.group(1))

    @staticmethod
    def _indices(command: Command, text: Optional[str]) -> Tuple[int, ...]:
        if text is None:
            return ()
        try:
            return tuple(expand_index_list(text))
        except ValueError as e:
            raise ScriptParseError(command.line_number, str(e)) from e

    @staticmethod
    def _point(command: Command, text: str) -> Point:
        try:
            return parse_point(text)
        except SoftPathError as e:
            raise ScriptParseError(command.line_number, str(e)) from e

    def _resolve(self, name: str) -> Path:
        return self.out_dir / name

    def _print(self, text: str) -> None:
        self.output.write(text)
        if not text.endswith("\n"):
            self.output.write("\n")

    def _update(self, name: str, operation, *args, **kwargs) -> None:  # type: ignore
        self.registry.store(
            name, operation(self.registry.lookup(name), *args, **kwargs)
        )

    # loading and inspection

    def _do_load(self, command: Command, name: str, data: str) -> None:
        self.registry.store(name, parse(data))

    def _do_loadfile(self, command: Command, name: str, path_file: str) -> None:
        self.registry.store(name, parse(Path(path_file).read_text(encoding="utf-8")))

    def _do_loadsvg(self, command: Command, name: str, svg_file: str) -> None:
        self.registry.store(name, read_svg(svg_file))

    def _do_clone(self, command: Command, target: str, source: str) -> None:
        self.registry.clone(target, source)

    def _do_show(self, command: Command, name: str) -> None:
        self._print(serialize(self.registry.lookup(name)))

    def _do_point(self, command: Command, name: str, t: str) -> None:
        path = self.registry.lookup(name)
        point = param_utils.locate(path, self._number(command, t)).point
        self._print(f"{format_number(point.x)} {format_number(point.y)}")

    def _do_frame(self, command: Command, name: str, t: str) -> None:
        frame = param_utils.frame_at(
            self.registry.lookup(name),
            self._number(command, t),
            upright=bool(command.options.get("upright")),  # type: ignore[union-attr]
        )
        self._print(
            f"{format_number(frame.origin.x)} {format_number(frame.origin.y)} "
            f"{format_number(math.degrees(frame.angle_rad))}"
        )

    # whole path edits

    def _do_reverse(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.reverse)

    def _do_translate(self, command: Command, name: str, dx: str, dy: str) -> None:
        self._update(
            name,
            edit_utils.translate,
            self._number(command, dx),
            self._number(command, dy),
        )

    def _do_transform(self, command: Command, name: str, spec: str) -> None:
        try:
            t = parse_transform(spec)
        except SoftPathError as e:
            raise ScriptParseError(command.line_number, str(e)) from e
        self._update(name, edit_utils.transform, t)

    def _do_span(self, command: Command, name: str, a: str, b: str) -> None:
        self._update(
            name, edit_utils.span, self._point(command, a), self._point(command, b)
        )

    def _do_placeat(self, command: Command, name: str, source: str, t: str) -> None:
        self._update(
            name,
            param_utils.place_at,
            self.registry.lookup(source),
            self._number(command, t),
            upright=bool(command.options.get("upright")),  # type: ignore[union-attr]
        )

    # intersections

    def _do_splitself(self, command: Command, name: str) -> None:
        self._update(name, intersect_utils.split_self)

    def _do_splitwith(self, command: Command, name: str, other: str) -> None:
        self._update(name, intersect_utils.split_with, self.registry.lookup(other))

    def _do_splitboth(self, command: Command, first: str, second: str) -> None:
        p, q = intersect_utils.split_both(
            self.registry.lookup(first), self.registry.lookup(second)
        )
        self.registry.store(first, p).store(second, q)

    def _do_replacelines(self, command: Command, name: str) -> None:
        self._update(name, intersect_utils.replace_lines)

    # components

    def _do_components(
        self, command: Command, name: str, prefix: str = DEFAULT_COMPONENT_PREFIX
    ) -> None:
        pieces = get_components(self.registry.lookup(name))
        for i, piece in enumerate(pieces, start=1):
            self.registry.store(f"{prefix}_{i}", piece)
        log.info(f"Stored {len(pieces)} components of {name} under prefix {prefix}")

    def _do_gaps(
        self, command: Command, name: str, amount: str, indices: Optional[str] = None
    ) -> None:
        gap = GapSpec(self._number(command, amount), self._indices(command, indices))
        self._update(name, edit_utils.insert_gaps_components, gap)

    def _do_gapsseg(
        self, command: Command, name: str, amount: str, indices: Optional[str] = None
    ) -> None:
        gap = GapSpec(self._number(command, amount), self._indices(command, indices))
        self._update(name, edit_utils.insert_gaps_segments, gap)

    def _do_join(self, command: Command, name: str, indices: str) -> None:
        self._update(name, edit_utils.join_components, self._indices(command, indices))

    def _do_joinwith(
        self, command: Command, name: str, splice: str, indices: Optional[str] = None
    ) -> None:
        self._update(
            name,
            edit_utils.join_with,
            self.registry.lookup(splice),
            self._indices(command, indices),
            upright=bool(command.options.get("upright")),  # type: ignore[union-attr]
        )

    def _do_joinwithcurve(
        self, command: Command, name: str, indices: Optional[str] = None
    ) -> None:
        self._update(name, edit_utils.join_with_curve, self._indices(command, indices))

    def _do_spotweld(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.spot_weld)

    def _do_removeempty(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.remove_empty)

    def _do_remove(self, command: Command, name: str, indices: str) -> None:
        removed = self._indices(command, indices)
        self._update(name, edit_utils.remove_components, removed)

    def _do_open(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.open_path)

    def _do_close(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.close_path, CloseMode.PLAIN)

    def _do_adjustclose(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.close_path, CloseMode.ADJUST)

    def _do_closewith(self, command: Command, name: str, splice: str) -> None:
        self._update(
            name, edit_utils.close_path, CloseMode.WITH, self.registry.lookup(splice)
        )

    def _do_closewithcurve(self, command: Command, name: str) -> None:
        self._update(name, edit_utils.close_path, CloseMode.WITH_CURVE)

    def _do_splice(
        self, command: Command, initial: str, middle: str, final: str
    ) -> None:
        self._update(
            initial,
            edit_utils.splice,
            self.registry.lookup(middle),
            self.registry.lookup(final),
        )

    def _do_to(self, command: Command, base: str, splice: str, target: str) -> None:
        self._update(
            base,
            edit_utils.span_to,
            self.registry.lookup(splice),
            self._point(command, target),
        )

    def _do_bridge(
        self,
        command: Command,
        over: str,
        under: str,
        splice: str,
        span_gap: str,
        under_gap: str,
    ) -> None:
        bridged, gapped = edit_utils.bridge(
            self.registry.lookup(over),
            self.registry.lookup(under),
            self.registry.lookup(splice),
            self._number(command, span_gap),
            self._number(command, under_gap),
        )
        self.registry.store(over, bridged).store(under, gapped)

    def _do_knot(
        self, command: Command, name: str, gap: str, indices: Optional[str] = None
    ) -> None:
        strands = edit_utils.knot(
            self.registry.lookup(name),
            self._number(command, gap),
            self._indices(command, indices),
            draft=bool(command.options.get("draft")),  # type: ignore[union-attr]
        )
        self.registry.store(name, concat(strands))

    # shortening, splitting and keeping

    def _shorten(
        self, command: Command, name: str, where: PathEnd, length: str
    ) -> None:
        self._update(name, param_utils.shorten, where, self._number(command, length))

    def _do_shortenstart(self, command: Command, name: str, length: str) -> None:
        self._shorten(command, name, PathEnd.START, length)

    def _do_shortenend(self, command: Command, name: str, length: str) -> None:
        self._shorten(command, name, PathEnd.END, length)

    def _do_shortenboth(self, command: Command, name: str, length: str) -> None:
        self._shorten(command, name, PathEnd.BOTH, length)

    def _do_splitat(self, command: Command, name: str, t: str) -> None:
        self._update(name, param_utils.split_at, self._number(command, t))

    def _do_splitinto(
        self, command: Command, start: str, end: str, source: str, t: str
    ) -> None:
        before, after = param_utils.split_into(
            self.registry.lookup(source), self._number(command, t)
        )
        self.registry.store(start, before).store(end, after)

    def _do_keepstart(self, command: Command, name: str, t: str) -> None:
        self._update(name, param_utils.keep, KeepSide.START, self._number(command, t))

    def _do_keepend(self, command: Command, name: str, t: str) -> None:
        self._update(name, param_utils.keep, KeepSide.END, self._number(command, t))

    def _do_keepmiddle(self, command: Command, name: str, t1: str, t2: str) -> None:
        self._update(
            name,
            param_utils.keep,
            KeepSide.MIDDLE,
            self._number(command, t1),
            self._number(command, t2),
        )

    # combining

    def _do_append(self, command: Command, base: str, inserted: str) -> None:
        options = command.options or {}
        transform = None
        if "transform" in options:
            try:
                transform = parse_transform(str(options["transform"]))
            except SoftPathError as e:
                raise ScriptParseError(command.line_number, str(e)) from e

        opts = AppendOptions(
            reverse=bool(options.get("reverse")),
            move=bool(options.get("move")),
            weld=bool(options.get("weld")),
            transform=transform,
        )
        self._update(base, append, self.registry.lookup(inserted), opts)

    def _do_insert(self, command: Command, base: str, inserted: str) -> None:
        self._update(base, insert, self.registry.lookup(inserted))

    # output

    def _do_svg(self, command: Command, *names: str) -> None:
        svg_file = None
        if len(names) > 1 and names[-1].lower().endswith(".svg"):
            names, svg_file = names[:-1], names[-1]
        if svg_file is None:
            svg_file = f"{names[0]}.svg"

        paths = [(name, self.registry.lookup(name), SvgStyle()) for name in names]
        self.out_dir.mkdir(parents=True, exist_ok=True)
        write_svg(paths, self._resolve(svg_file))


def run_script(
    script: str, out_dir: Union[str, Path] = ".", output: Optional[TextIO] = None
) -> int:
    """
    Run a soft path script with a fresh registry.

    Parameters
    ----------
    script: str
        The script text, one command per line. ``#`` starts a comment.
    out_dir: Union[str, Path]
        Directory that ``svg`` writes into.
        Default: "."
    output: Optional[TextIO]
        Where printed results go.
        Default: None (standard output)

    Returns
    -------
    int
        The exit status: 0, or 1 after a malformed line or a file error.

    See Also
    --------
    softpath.script_utils.ScriptRunner
    """
    return ScriptRunner(out_dir, output).run(script)

