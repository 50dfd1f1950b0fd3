"""Deterministic simulator of the shape-changing display mechatronics.

The simulated hardware is a coordinator driving a ring of six boards over
the framed serial protocol: boards 0..4 each move two leaf channels
(stepper + endless screw + pulling cable), board 5 holds the LED cluster.
Messages travel around the ring and loop back to the coordinator.  A relay
gates power to the motor boards; the coordinator and the LEDs stay powered.
Because the screws retain cable tension, unpowered channels hold their
position exactly.

The simulator is a single state machine advanced by explicit ticks.  Every
operation returns a fresh :class:`ControllerState`; one advancing context
owns the latest state while readers are free to inspect older snapshots and
the append-only event log.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .encoder import LeafPosition
from .motion import LEAF_COUNT, DeviceProfile, MotionCommand, MotionPlan
from .protocol import Frame, Opcode, decode_frame, encode_frame

MOTOR_BOARDS = 5
LED_BOARD = 5
EVENT_STOP = 0x00

DEFAULT_TICK = 0.01
_EPS = 1e-9


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LeafChannel:
    """One stepper-driven pulling mechanism with its two IR sensors."""

    current_step: int
    target_step: int
    steps_full_range: int
    rotation_count: int = 0
    step_carry: float = 0.0  # sub-step motion budget carried between ticks

    @property
    def stop_sensor_active(self) -> bool:
        return self.current_step == 0

    @property
    def moving(self) -> bool:
        return self.current_step != self.target_step


@dataclass(frozen=True)
class BoardState:
    board_id: int
    channels: tuple[LeafChannel, ...]
    powered: bool
    led_color: str | None = None  # LED cluster boards only; held constant


@dataclass(frozen=True)
class LogEvent:
    t: float
    board: int | None
    kind: str
    detail: tuple[tuple[str, object], ...]

    def as_record(self) -> dict:
        return {"t": self.t, "board": self.board, "kind": self.kind,
                "detail": dict(self.detail)}


@dataclass(frozen=True)
class PendingCommand:
    dispatch_time: float
    command: MotionCommand


@dataclass(frozen=True)
class ControllerState:
    boards: tuple[BoardState, ...]
    relay_on: bool
    clock: float
    step_rate: float
    event_log: tuple[LogEvent, ...] = ()
    pending: tuple[PendingCommand, ...] = ()

    @property
    def busy(self) -> bool:
        return bool(self.pending) or any(
            ch.moving for b in self.boards[:MOTOR_BOARDS] for ch in b.channels
        )


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def position_to_steps(position: LeafPosition, steps_full_range: int) -> int:
    return _round_half_up(position / 10 * steps_full_range)


def initial_state(
    profile: DeviceProfile, positions: list[LeafPosition] | None = None
) -> ControllerState:
    """A powered-down controller; ``positions`` preloads the leaves (useful
    for replay and testing), default fully furled."""
    if positions is None:
        positions = [0] * LEAF_COUNT
    if len(positions) != LEAF_COUNT:
        raise ValueError(f"expected {LEAF_COUNT} leaf positions, got {len(positions)}")
    boards = []
    for board_id in range(MOTOR_BOARDS):
        channels = []
        for ch in range(2):
            leaf = board_id * 2 + ch
            steps = position_to_steps(positions[leaf], profile.steps_full_range[leaf])
            channels.append(
                LeafChannel(
                    current_step=steps,
                    target_step=steps,
                    steps_full_range=profile.steps_full_range[leaf],
                )
            )
        boards.append(BoardState(board_id, tuple(channels), powered=False))
    boards.append(BoardState(LED_BOARD, (), powered=True, led_color="green"))
    return ControllerState(
        boards=tuple(boards), relay_on=False, clock=0.0, step_rate=profile.step_rate
    )


def leaf_positions(ctrl: ControllerState) -> list[LeafPosition]:
    """Per-leaf discrete positions read back from the step counters."""
    positions = []
    for board in ctrl.boards[:MOTOR_BOARDS]:
        for channel in board.channels:
            positions.append(
                _round_half_up(channel.current_step / channel.steps_full_range * 10)
            )
    return positions


def submit_plan(ctrl: ControllerState, plan: MotionPlan) -> ControllerState:
    """Queue a plan for execution: the relay is energized and each command
    will be dispatched as a SET_TARGET frame when its start time arrives."""
    if ctrl.busy:
        raise SimulationError("a plan is already executing")
    for cmd in plan.commands:
        if not 0 <= cmd.leaf < LEAF_COUNT:
            raise SimulationError(f"plan references unknown leaf {cmd.leaf}")
    if not plan.commands:
        return ctrl
    pending = tuple(
        PendingCommand(ctrl.clock + cmd.start_time, cmd) for cmd in plan.commands
    )
    events = ctrl.event_log
    relay_on = ctrl.relay_on
    boards = ctrl.boards
    if not relay_on:
        relay_on = True
        boards = _set_motor_power(boards, True)
        events = events + (LogEvent(ctrl.clock, None, "relay", (("on", True),)),)
    return replace(ctrl, boards=boards, relay_on=relay_on, pending=pending, event_log=events)


def tick(ctrl: ControllerState, dt: float) -> ControllerState:
    """Advance the simulation by ``dt`` seconds: dispatch due commands, move
    powered channels toward their targets, emit sensor events, and gate the
    relay off once everything is idle."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    boards = list(ctrl.boards)
    events: list[LogEvent] = []
    relay_on = ctrl.relay_on
    new_clock = ctrl.clock + dt

    # Commands beginning inside this tick window dispatch now; the portion
    # of the tick before their start time is withheld from their motion
    # budget (a negative carry), so completion stays within one tick of the
    # planned schedule.
    due = [p for p in ctrl.pending if p.dispatch_time < new_clock - _EPS]
    pending = tuple(p for p in ctrl.pending if p.dispatch_time >= new_clock - _EPS)
    if due and not relay_on:
        relay_on = True
        boards = list(_set_motor_power(tuple(boards), True))
        events.append(LogEvent(due[0].dispatch_time, None, "relay", (("on", True),)))
    for item in due:
        cmd = item.command
        board_id, channel_id = divmod(cmd.leaf, 2)
        board = boards[board_id]
        channel = board.channels[channel_id]
        target = position_to_steps(cmd.target, channel.steps_full_range)
        request = Frame(
            board_id,
            Opcode.SET_TARGET,
            bytes((channel_id, target >> 8, target & 0xFF)),
        )
        received = decode_frame(encode_frame(request))  # around the ring and back
        events.append(
            LogEvent(
                item.dispatch_time,
                board_id,
                "set_target",
                (
                    ("leaf", cmd.leaf),
                    ("channel", channel_id),
                    ("from_step", channel.current_step),
                    ("target_step", target),
                ),
            )
        )
        withheld = max(0.0, item.dispatch_time - ctrl.clock)
        channel = replace(
            channel, target_step=target, step_carry=-withheld * ctrl.step_rate
        )
        channels = list(board.channels)
        channels[channel_id] = channel
        boards[board_id] = replace(board, channels=tuple(channels))
        ack = decode_frame(encode_frame(Frame(received.board_id, Opcode.ACK,
                                              bytes((channel_id,)))))
        events.append(
            LogEvent(item.dispatch_time, ack.board_id, "ack", (("leaf", cmd.leaf),))
        )
    for board_id in range(MOTOR_BOARDS):
        board = boards[board_id]
        if not board.powered:
            continue  # unpowered channels hold position exactly
        channels = list(board.channels)
        changed = False
        for channel_id, channel in enumerate(channels):
            if not channel.moving:
                continue
            budget = ctrl.step_rate * dt + channel.step_carry
            remaining = abs(channel.target_step - channel.current_step)
            steps = min(int(budget), remaining)
            if steps == 0:
                channels[channel_id] = replace(channel, step_carry=budget)
                changed = True
                continue
            direction = 1 if channel.target_step > channel.current_step else -1
            new_step = channel.current_step + direction * steps
            reached = new_step == channel.target_step
            channels[channel_id] = replace(
                channel,
                current_step=new_step,
                rotation_count=channel.rotation_count + steps,
                step_carry=0.0 if reached else budget - steps,
            )
            changed = True
            leaf = board_id * 2 + channel_id
            if new_step == 0:
                event = Frame(board_id, Opcode.EVENT, bytes((channel_id, EVENT_STOP)))
                decode_frame(encode_frame(event))
                events.append(
                    LogEvent(new_clock, board_id, "stop_sensor", (("leaf", leaf),))
                )
            if reached:
                events.append(
                    LogEvent(
                        new_clock,
                        board_id,
                        "target_reached",
                        (("leaf", leaf), ("step", new_step)),
                    )
                )
        if changed:
            boards[board_id] = replace(board, channels=tuple(channels))

    still_moving = any(ch.moving for b in boards[:MOTOR_BOARDS] for ch in b.channels)
    if relay_on and not still_moving and not pending:
        relay_on = False
        boards = list(_set_motor_power(tuple(boards), False))
        events.append(LogEvent(new_clock, None, "relay", (("on", False),)))

    return replace(
        ctrl,
        boards=tuple(boards),
        relay_on=relay_on,
        clock=new_clock,
        pending=pending,
        event_log=ctrl.event_log + tuple(events),
    )


def power_gate(ctrl: ControllerState) -> ControllerState:
    """De-energize the relay (and the motor boards) when nothing is moving;
    the coordinator and the LED board stay powered."""
    moving = any(ch.moving for b in ctrl.boards[:MOTOR_BOARDS] for ch in b.channels)
    if moving or not ctrl.relay_on:
        return ctrl
    return replace(
        ctrl,
        relay_on=False,
        boards=_set_motor_power(ctrl.boards, False),
        event_log=ctrl.event_log + (LogEvent(ctrl.clock, None, "relay", (("on", False),)),),
    )


def run_plan(
    ctrl: ControllerState, plan: MotionPlan, dt: float = DEFAULT_TICK
) -> ControllerState:
    """Submit ``plan`` and tick until it has fully played out (all targets
    reached and the plan's total duration elapsed)."""
    ctrl = submit_plan(ctrl, plan)
    start = ctrl.clock
    deadline = plan.total_duration + (len(plan.commands) + 2) * dt + 1.0
    while ctrl.pending or ctrl.busy or ctrl.clock - start + _EPS < plan.total_duration:
        if ctrl.clock - start > deadline:
            raise SimulationError("plan failed to complete in simulated time")
        ctrl = tick(ctrl, dt)
    return ctrl


def events_to_ndjson(events: tuple[LogEvent, ...]) -> str:
    """Serialize the event log as newline-delimited JSON records."""
    lines = [json.dumps(e.as_record(), sort_keys=True) for e in events]
    return "\n".join(lines) + ("\n" if lines else "")


def _set_motor_power(boards: tuple[BoardState, ...], on: bool) -> tuple[BoardState, ...]:
    updated = [
        replace(b, powered=on) if b.board_id < MOTOR_BOARDS else b for b in boards
    ]
    return tuple(updated)
