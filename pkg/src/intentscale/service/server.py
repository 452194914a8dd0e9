"""Live telemetry/control server.

One engine session runs inside the asyncio loop at a fixed simulated
tick (wall-paced, drift-corrected). Client input (pose/clutch/params)
is never dropped as a stream: poses are resampled by holding the latest
value at each tick, so a display-rate client and the 100 Hz loop stay
decoupled. State frames go the other way at a decimated rate through
small per-client queues; a slow or absent reader loses frames, never
ticks. All server-to-client frames on one connection draw from a single
strictly increasing sequence, so drops show up as gaps, never reorders.
"""

from __future__ import annotations

import asyncio
import contextlib
import logging

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..engine import SharedControlEngine, StepResult
from ..errors import ParamConstraintError, ParamRangeError, ProtocolError
from ..fcm import ModelBank
from ..sim.scenario import Scenario
from ..sim.world import PegWorld
from .protocol import (
    PROTOCOL_VERSION,
    ClutchMessage,
    ErrorMessage,
    HelloMessage,
    ParamsMessage,
    PoseMessage,
    SeqCounter,
    StateMessage,
    encode_message,
)

log = logging.getLogger(__name__)

CLIENT_QUEUE_FRAMES = 8


def _rings_payload(world: PegWorld) -> tuple[dict, ...]:
    return tuple(
        {
            "color": r.color,
            "size": r.size.value,
            "state": r.state.value,
            "pos": [float(r.position[0]), float(r.position[1])],
            "radius": r.radius,
        }
        for r in world.rings
    )


class LiveSession:
    """Engine + world + fan-out state shared by all connections."""

    def __init__(
        self,
        scenario: Scenario,
        models: ModelBank | None = None,
        decimation: int = 3,
        tick_interval: float | None = None,
    ):
        self.scenario = scenario
        self.world = scenario.build_world()
        self.engine = SharedControlEngine(scenario.engine, models=models)
        self.decimation = max(1, decimation)
        self.dt = scenario.engine.dt
        self.tick_interval = self.dt if tick_interval is None else tick_interval
        self.tick_index = 0
        self.latest_pose = np.asarray(scenario.engine.follower_start, float) * 0.0
        self.latest_clutch = False
        self._pose_consumed = True
        self.dropped_poses = 0
        self.dropped_state_frames = 0
        self.clients: set[asyncio.Queue] = set()
        self._seq = SeqCounter()
        self.last_result: StepResult | None = None

    # -- input (called from connection handlers) --

    def submit_pose(self, position) -> None:
        if not self._pose_consumed:
            self.dropped_poses += 1
        self.latest_pose = np.asarray(position, dtype=float)
        self._pose_consumed = False

    def submit_clutch(self, pressed: bool) -> None:
        self.latest_clutch = bool(pressed)

    def submit_params(self, theta_norm) -> None:
        self.engine.queue_params(theta_norm)

    # -- tick loop --

    def tick_once(self) -> StepResult:
        t = self.tick_index * self.dt
        res = self.engine.step(t, self.latest_pose, self.latest_clutch)
        self._pose_consumed = True
        self.world.update(res.follower[:2])
        self.tick_index += 1
        self.last_result = res
        if self.tick_index % self.decimation == 0:
            frame = encode_message(self.state_message(res)).decode("utf-8")
            for queue in list(self.clients):
                try:
                    queue.put_nowait(frame)
                except asyncio.QueueFull:
                    self.dropped_state_frames += 1
        return res

    async def run(self) -> None:
        loop = asyncio.get_running_loop()
        next_deadline = loop.time()
        while True:
            self.tick_once()
            next_deadline += self.tick_interval
            delay = next_deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            else:
                next_deadline = loop.time()  # fell behind; resync, no spiral

    # -- frames --

    def state_message(self, res: StepResult) -> StateMessage:
        fused = (0.5, 0.5)
        label = None
        if res.intent is not None:
            fused = res.intent.fused.as_tuple()
            label = res.intent.label
        params = self.engine.params
        return StateMessage(
            seq=self._seq.take(),
            t=res.t,
            s_intent=res.s_applied,
            fused=fused,
            label=label,
            follower=tuple(float(v) for v in res.follower),
            clutched=res.clutched,
            n_clutch=res.clutch_count,
            degraded=res.degraded,
            params_norm=params.normalized(),
            params={
                "rho": params.rho,
                "s_fine": params.s_fine,
                "s_coarse": params.s_coarse,
            },
            rings=_rings_payload(self.world),
        )

    def hello_message(self) -> HelloMessage:
        params = self.engine.params
        return HelloMessage(
            seq=self._seq.take(),
            version=PROTOCOL_VERSION,
            scenario=self.scenario.name,
            dt=self.dt,
            decimation=self.decimation,
            workspace_radius=self.scenario.workspace_radius,
            bounds=tuple(tuple(float(v) for v in b) for b in self.world.bounds),
            pegs=tuple(
                {"color": p.color, "pos": [float(p.position[0]), float(p.position[1])]}
                for p in self.world.pegs
            ),
            rings=_rings_payload(self.world),
            params_norm=params.normalized(),
            params={
                "rho": params.rho,
                "s_fine": params.s_fine,
                "s_coarse": params.s_coarse,
            },
            theta_min=params.theta_min,
            theta_max=params.theta_max,
        )

    def error_message(self, code: str, message: str) -> ErrorMessage:
        return ErrorMessage(seq=self._seq.take(), code=code, message=message)


async def _sender(websocket: WebSocket, queue: asyncio.Queue) -> None:
    while True:
        frame = await queue.get()
        await websocket.send_text(frame)


async def _receiver(websocket: WebSocket, session: LiveSession, queue: asyncio.Queue) -> None:
    while True:
        data = await websocket.receive_text()
        try:
            msg = decode_input(data)
        except ProtocolError as exc:
            _offer(queue, session.error_message("decode", str(exc)))
            continue
        if isinstance(msg, PoseMessage):
            session.submit_pose(msg.position)
        elif isinstance(msg, ClutchMessage):
            session.submit_clutch(msg.pressed)
        elif isinstance(msg, ParamsMessage):
            try:
                session.submit_params(msg.v)
            except (ParamRangeError, ParamConstraintError) as exc:
                _offer(queue, session.error_message("params", str(exc)))
        else:
            _offer(queue, session.error_message("unexpected", "not an input message"))


def decode_input(data: str):
    from .protocol import decode_message

    return decode_message(data)


def _offer(queue: asyncio.Queue, msg) -> None:
    with contextlib.suppress(asyncio.QueueFull):
        queue.put_nowait(encode_message(msg).decode("utf-8"))


def create_app(session: LiveSession, ui_dir: str | None = None) -> FastAPI:
    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(session.run())
        try:
            yield
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task

    app = FastAPI(title="intentscale", lifespan=lifespan)

    @app.get("/healthz")
    async def healthz():
        return {"ok": True, "ticks": session.tick_index}

    @app.get("/stats")
    async def stats():
        return {
            "ticks": session.tick_index,
            "clients": len(session.clients),
            "dropped_state_frames": session.dropped_state_frames,
            "dropped_poses": session.dropped_poses,
            "n_clutch": session.engine.clutch.clutch_count,
            "degraded": session.engine.degraded,
        }

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        queue: asyncio.Queue = asyncio.Queue(maxsize=CLIENT_QUEUE_FRAMES)
        await websocket.send_text(encode_message(session.hello_message()).decode("utf-8"))
        session.clients.add(queue)
        sender = asyncio.create_task(_sender(websocket, queue))
        try:
            await _receiver(websocket, session, queue)
        except WebSocketDisconnect:
            pass
        finally:
            session.clients.discard(queue)
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
