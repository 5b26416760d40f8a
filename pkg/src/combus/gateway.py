"""HTTP/WebSocket gateway: chat, scenario browsing, eKG queries, consent.

The gateway is a plain bus client around a running Agent. Writes go through
bus events only (text-in frames and consent ControlCommands); reads are
checkpoint-then-read file access plus in-memory eKG queries.
"""

import asyncio
import itertools
import json
import logging
import threading
from contextlib import asynccontextmanager

import click
import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from combus.ekg.iri import InvalidIri, Literal
from combus.ekg.store import UnboundPredicateNamespace
from combus.eventbus.events import ControlCommand

logger = logging.getLogger(__name__)

MEDIA_TYPES = {".wav": "audio/wav", ".png": "image/png", ".json": "application/json"}
SCENARIO_FILES = ("text", "audio", "image", "rdf")


def _term_to_plain(term):
    if isinstance(term, Literal):
        return {"value": term.value, "datatype": term.datatype}
    return term


class ChatHub:
    """Fans text-out events from the bus thread out to websocket queues."""

    def __init__(self):
        self.queues = {}
        self._counter = itertools.count(1)
        self.loop = None

    def register(self):
        cid = next(self._counter)
        self.queues[cid] = asyncio.Queue()
        return cid

    def unregister(self, cid):
        self.queues.pop(cid, None)

    def broadcast(self, message):
        if self.loop is None:
            return
        for queue in list(self.queues.values()):
            self.loop.call_soon_threadsafe(queue.put_nowait, message)


def create_app(agent) -> FastAPI:
    hub = ChatHub()
    # the inline bus is single-threaded; serialize writes coming from the
    # server's worker threads
    feed_lock = threading.Lock()

    def feed_text(text, source):
        with feed_lock:
            agent.feed_text(text, source)

    @asynccontextmanager
    async def lifespan(_app):
        hub.loop = asyncio.get_running_loop()
        yield

    app = FastAPI(title="combus gateway", lifespan=lifespan)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.agent = agent
    app.state.hub = hub

    agent.bus.subscribe(["text-out"], "gateway", lambda event: hub.broadcast({
        "direction": "agent",
        "text": event.payload.signal.get("text", ""),
        "timestamp": event.timestamp,
        "scenario_id": agent.scenario.id if agent.scenario else None,
        "signal_id": event.payload.signal.get("id"),
    }))

    @app.websocket("/ws/chat")
    async def ws_chat(ws: WebSocket):
        await ws.accept()
        cid = hub.register()
        source = f"chat-ui-{cid}"
        queue = hub.queues[cid]

        async def sender():
            while True:
                await ws.send_json(await queue.get())

        task = asyncio.create_task(sender())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    text = json.loads(raw).get("text", "")
                except (json.JSONDecodeError, AttributeError):
                    text = raw
                if text:
                    await asyncio.to_thread(feed_text, text, source)
        except WebSocketDisconnect:
            pass
        finally:
            task.cancel()
            hub.unregister(cid)

    @app.get("/scenarios")
    def list_scenarios():
        agent.flush()
        out = []
        for scenario_id in agent.store.list_scenarios():
            meta_path = agent.store.scenario_dir(scenario_id) / f"{scenario_id}.json"
            try:
                meta = json.loads(meta_path.read_text("utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            out.append(meta)
        return out

    @app.get("/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        agent.flush()
        directory = agent.store.scenario_dir(scenario_id)
        meta_path = directory / f"{scenario_id}.json"
        if not meta_path.exists():
            return JSONResponse({"error": "unknown scenario"}, status_code=404)
        bundle = {"scenario": json.loads(meta_path.read_text("utf-8"))}
        for name in SCENARIO_FILES:
            path = directory / f"{name}.json"
            bundle[name] = (json.loads(path.read_text("utf-8"))
                            if path.exists() else [])
        return bundle

    @app.get("/scenarios/{scenario_id}/media/{media_path:path}")
    def get_media(scenario_id: str, media_path: str):
        directory = agent.store.scenario_dir(scenario_id)
        target = (directory / media_path).resolve()
        if not str(target).startswith(str(directory.resolve()) + "/") \
                or not target.is_file():
            return JSONResponse({"error": "not found"}, status_code=404)
        media_type = MEDIA_TYPES.get(target.suffix, "application/octet-stream")
        return Response(target.read_bytes(), media_type=media_type)

    @app.post("/ekg/query")
    def ekg_query(body: dict):
        patterns = body.get("patterns")
        if patterns is None and "pattern" in body:
            patterns = [body["pattern"]]
        if not isinstance(patterns, list) or not patterns or not all(
                isinstance(p, list) and len(p) in (3, 4) for p in patterns):
            return JSONResponse({"error": "malformed pattern"}, status_code=400)
        try:
            bindings = agent.ekg.query([tuple(p) for p in patterns])
        except (ValueError, InvalidIri, UnboundPredicateNamespace) as e:
            return JSONResponse({"error": str(e)}, status_code=400)
        return [{k: _term_to_plain(v) for k, v in b.items()} for b in bindings]

    @app.get("/intentions")
    def intentions():
        return {"active": agent.manager.active()}

    @app.post("/consent")
    def consent(body: dict):
        granted = body.get("granted")
        if not isinstance(granted, bool):
            return JSONResponse({"error": "granted must be a bool"}, status_code=400)
        command = "consent-granted" if granted else "consent-denied"
        with feed_lock:
            agent.bus.emit("control", ControlCommand(command=command), "gateway")
        return {"command": command}

    return app


@click.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8680, show_default=True)
def main(config_path, host, port):
    """Serve the gateway for one agent session."""
    from combus.runtime import AgentConfig, assemble

    agent = assemble(AgentConfig.load(config_path)).start()
    try:
        uvicorn.run(create_app(agent), host=host, port=port)
    finally:
        agent.stop()
        agent.save_ekg()


if __name__ == "__main__":
    main()
