from __future__ import annotations

import random
import socket
import threading
import time
from contextlib import contextmanager

import pytest
import uvicorn
from fastapi.testclient import TestClient

from winoscore_service import ServiceSettings, create_app

_NOUNS = [
    "table", "chair", "bottle", "suitcase", "trophy",
    "pencil", "drawer", "basket", "ladder", "mirror",
]


def make_records(n: int, seed: int) -> list[dict]:
    """Synthetic two-option fill-in-the-blank records with gold answers."""
    rng = random.Random(seed)
    records = []
    for i in range(n):
        option1, option2 = rng.sample(_NOUNS, 2)
        records.append(
            {
                "qID": f"svc{i:04d}",
                "sentence": (
                    f"The {option1} stayed outside room {i} while the {option2} "
                    f"fit because the _ was smaller."
                ),
                "option1": option1,
                "option2": option2,
                "answer": rng.choice(("1", "2")),
            }
        )
    return records


def random_sources(n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    words = _NOUNS + ["holds", "fits", "because", "the", "premise:", "hypothesis:"]
    return [
        " ".join(rng.choice(words) for _ in range(rng.randint(3, 12))) + f" #{i}"
        for i in range(n)
    ]


@pytest.fixture(scope="session")
def settings() -> ServiceSettings:
    return ServiceSettings(model="tiny", seed=1234, max_batch=64, debug=True)


@pytest.fixture(scope="session")
def client(settings) -> TestClient:
    with TestClient(create_app(settings)) as test_client:
        yield test_client


def free_port() -> int:
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    return port


@contextmanager
def live_server(settings: ServiceSettings):
    """Run the service under real uvicorn in a background thread."""
    port = free_port()
    config = uvicorn.Config(
        create_app(settings), host="127.0.0.1", port=port, log_level="warning"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 60
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("service did not start within 60s")
        time.sleep(0.05)
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=10)
