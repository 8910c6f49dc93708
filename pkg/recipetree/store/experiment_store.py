import hashlib
import json
import logging
import os
import re
import shutil
import threading
import uuid
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterator, Optional, Union

from pydantic import BaseModel

from recipetree.constants import (COMPLETE_MARKER, ENCODING_VERSION, EXPERIMENT_FILE, LOCKS_DIR, PAYLOAD_DIR,
                                  PAYLOAD_SUFFIX, QUARANTINE_DIR, SCHEMA_VERSION, STATE_FILE, STATES_DIR, TMP_PREFIX)
from recipetree.core.descriptors import StateDescriptor
from recipetree.core.hashing import StateHash
from recipetree.core.serialization import state_from_json, state_to_json
from recipetree.core.validation import validate_state
from recipetree.errors import (CorruptStateError, IncompatibleStoreError, NotAnExperimentError, StateNotFoundError,
                               StorageError)
from recipetree.graph.experiment_graph import ExperimentGraph
from recipetree.models.state_status import StateStatus
from recipetree.models.violation import Violation, ViolationCode
from recipetree.recipes.contents import StateView

try:
    import fcntl
except ImportError:  # Windows
    fcntl = None

logger = logging.getLogger(__name__)

_HASH_DIR = re.compile(r"^[0-9a-f]{64}$")

Payloads = dict[str, bytes]

# one lock per (experiment directory, state hash), shared by every store instance in the process
_state_locks: dict[tuple[str, str], threading.Lock] = {}
_state_locks_guard = threading.Lock()


class LoadReport(BaseModel):
    """States left out of a slim graph, with the reason for each."""

    excluded: list[Violation] = []

    @property
    def ok(self) -> bool:
        return not self.excluded


class ExperimentStore:
    """
    The experiment directory on disk.

    Layout::

        experiment.json                     schema/encoding versions, root hash, creation time
        states/<hash>/state.json            descriptor, canonical text
        states/<hash>/payload/<name>.bin    opaque payload blobs
        states/<hash>/COMPLETE              empty marker, written last
        locks/<hash>.lock                   advisory lock files of writers

    A state directory is authoritative only once COMPLETE exists. States are written to a temporary
    directory and renamed into place, so concurrent saves of different hashes never interfere. Writers of
    the same hash are serialized by a per-hash lock held by every store instance on the directory, and
    across processes by an `fcntl` lock where available. Reads take no locks.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    @property
    def experiment_file(self) -> Path:
        return self.path / EXPERIMENT_FILE

    @property
    def states_dir(self) -> Path:
        return self.path / STATES_DIR

    @property
    def quarantine_dir(self) -> Path:
        return self.path / QUARANTINE_DIR

    @property
    def locks_dir(self) -> Path:
        return self.path / LOCKS_DIR

    def state_dir(self, state_hash: StateHash) -> Path:
        return self.states_dir / state_hash.hex

    @classmethod
    def open(cls, path: Union[str, Path]) -> "ExperimentStore":
        """Open an initialized experiment directory."""
        store = cls(path)
        if not store.experiment_file.is_file():
            raise NotAnExperimentError(f"{path} is not an experiment directory (no {EXPERIMENT_FILE})")
        return store

    @classmethod
    def init_experiment_dir(cls, path: Union[str, Path], root_hash: StateHash) -> "ExperimentStore":
        """
        Create the directory skeleton and experiment.json. Reopening a store with the same root is a no-op.

        :raises IncompatibleStoreError: the directory holds an experiment with another root
        :raises StorageError: the directory cannot be written
        """
        store = cls(path)
        if store.experiment_file.is_file():
            recorded = store.metadata.get("root_hash")
            if recorded != root_hash.hex:
                raise IncompatibleStoreError(
                    f"{path} belongs to the experiment rooted at {str(recorded)[:8]}, not {root_hash.short}"
                )
            logger.debug(f"Reopened experiment directory {path}")
            return store

        metadata = {
            "schema_version": SCHEMA_VERSION,
            "encoding_version": ENCODING_VERSION,
            "root_hash": root_hash.hex,
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
        try:
            store.states_dir.mkdir(parents=True, exist_ok=True)
            store._atomic_write_text(store.experiment_file, json.dumps(metadata, sort_keys=True, indent=2) + "\n")
        except OSError as e:
            raise StorageError(f"Cannot initialize experiment directory {path}: {e}") from e
        logger.info(f"Initialized experiment directory {path} with root {root_hash.short}")
        return store

    @property
    def metadata(self) -> dict[str, Any]:
        try:
            return json.loads(self.experiment_file.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise NotAnExperimentError(f"{self.path} is not an experiment directory (no {EXPERIMENT_FILE})") from None
        except (OSError, ValueError) as e:
            raise NotAnExperimentError(f"Cannot read {self.experiment_file}: {e}") from e

    @property
    def root_hash(self) -> Optional[StateHash]:
        recorded = self.metadata.get("root_hash")
        return StateHash.from_hex(recorded) if recorded else None

    @contextmanager
    def _state_lock(self, state_hash: StateHash) -> Iterator[None]:
        """Hold the write lock of one state: first against other threads, then against other processes."""
        key = (str(self.path.resolve()), state_hash.hex)
        with _state_locks_guard:
            lock = _state_locks.setdefault(key, threading.Lock())
        with lock:
            if fcntl is None:
                yield
                return
            try:
                self.locks_dir.mkdir(parents=True, exist_ok=True)
                handle = open(self.locks_dir / f"{state_hash.hex}.lock", "a")
            except OSError as e:
                raise StorageError(f"Cannot lock state {state_hash.short}: {e}") from e
            with handle:
                fcntl.lockf(handle, fcntl.LOCK_EX)
                yield

    @staticmethod
    def _atomic_write_text(target: Path, text: str) -> None:
        tmp = target.with_name(f"{TMP_PREFIX}{target.name}-{uuid.uuid4().hex}")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, target)

    def read_descriptor(self, state_hash: StateHash) -> StateDescriptor:
        """Read state.json only. No payload is touched."""
        path = self.state_dir(state_hash) / STATE_FILE
        try:
            return state_from_json(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise StateNotFoundError(f"State {state_hash} is not in the store") from None

    def state_status(self, state_hash: StateHash) -> StateStatus:
        state_dir = self.state_dir(state_hash)
        if not state_dir.is_dir():
            return StateStatus.MISSING
        if not (state_dir / COMPLETE_MARKER).is_file():
            return StateStatus.INCOMPLETE
        try:
            descriptor = self.read_descriptor(state_hash)
        except Exception as e:
            logger.warning(f"Unreadable state {state_hash.short}: {e}")
            return StateStatus.CORRUPT
        if descriptor.hash != state_hash or validate_state(descriptor):
            return StateStatus.CORRUPT
        return StateStatus.COMPLETE

    def cache_lookup(self, state_hash: StateHash) -> bool:
        """A hit needs the state directory, its COMPLETE marker and a descriptor that re-validates."""
        return self.state_status(state_hash) is StateStatus.COMPLETE

    def quarantine(self, state_hash: StateHash) -> Optional[Path]:
        """Move a broken state directory and stale temporary writes for `state_hash` out of `states/`."""
        moved = None
        candidates = [self.state_dir(state_hash)] + sorted(self.states_dir.glob(f"{TMP_PREFIX}{state_hash.hex}-*"))
        for candidate in candidates:
            if not candidate.exists():
                continue
            self.quarantine_dir.mkdir(parents=True, exist_ok=True)
            target = self.quarantine_dir / f"{state_hash.hex}-{uuid.uuid4().hex}"
            shutil.move(str(candidate), str(target))
            logger.warning(f"Quarantined {candidate.name} of state {state_hash.short} to {target}")
            moved = moved or target
        return moved

    def save_state(self, descriptor: StateDescriptor, payloads: Payloads) -> None:
        """
        Persist a state atomically: write to a temporary directory, rename it into place, then write COMPLETE.

        Saving a state that is already complete is a no-op. Leftovers of an interrupted save are quarantined first.

        :param descriptor: a descriptor that passes `validate_state`
        :type descriptor: StateDescriptor
        :param payloads: one blob per name in `descriptor.nonhashed_attribute_names`
        :type payloads: dict[str, bytes]
        :raises CorruptStateError: the descriptor is invalid or the payload names do not match
        :raises StorageError: the write failed
        """
        violations = validate_state(descriptor)
        if violations:
            raise CorruptStateError(f"Refusing to save invalid state {descriptor.hash.short}: {violations[0]}")
        if set(payloads) != set(descriptor.nonhashed_attribute_names):
            raise CorruptStateError(
                f"Payloads {sorted(payloads)} do not match attributes {sorted(descriptor.nonhashed_attribute_names)}"
            )

        state_hash = descriptor.hash
        with self._state_lock(state_hash):
            status = self.state_status(state_hash)
            if status is StateStatus.COMPLETE:
                logger.debug(f"State {state_hash.short} already saved")
                return
            try:
                self.quarantine(state_hash)
                tmp = self.states_dir / f"{TMP_PREFIX}{state_hash.hex}-{uuid.uuid4().hex}"
                (tmp / PAYLOAD_DIR).mkdir(parents=True)
                (tmp / STATE_FILE).write_text(state_to_json(descriptor), encoding="utf-8")
                for name in sorted(payloads):
                    (tmp / PAYLOAD_DIR / f"{name}{PAYLOAD_SUFFIX}").write_bytes(payloads[name])
                try:
                    os.rename(tmp, self.state_dir(state_hash))
                except OSError:
                    # another process won the rename
                    shutil.rmtree(tmp, ignore_errors=True)
                    if self.cache_lookup(state_hash):
                        return
                    raise
                self._write_marker(state_hash)
            except OSError as e:
                raise StorageError(f"Cannot save state {state_hash.short}: {e}") from e
        logger.debug(f"Saved state {state_hash.short}")

    def _write_marker(self, state_hash: StateHash) -> None:
        (self.state_dir(state_hash) / COMPLETE_MARKER).touch()

    def update_tags(self, state_hash: StateHash, tags: frozenset[str]) -> StateDescriptor:
        """Merge `tags` into a complete state's stored tags. Tags are not hashed, so the state stays valid."""
        with self._state_lock(state_hash):
            descriptor = self.read_descriptor(state_hash)
            merged = descriptor.tags | frozenset(tags)
            if merged == descriptor.tags:
                return descriptor
            updated = descriptor.with_tags(merged)
            try:
                self._atomic_write_text(self.state_dir(state_hash) / STATE_FILE, state_to_json(updated))
            except OSError as e:
                raise StorageError(f"Cannot update tags of state {state_hash.short}: {e}") from e
        logger.info(f"Merged tags {sorted(merged - descriptor.tags)} into cached state {state_hash.short}")
        return updated

    def _read_payload(self, state_hash: StateHash, name: str) -> bytes:
        return (self.state_dir(state_hash) / PAYLOAD_DIR / f"{name}{PAYLOAD_SUFFIX}").read_bytes()

    def payload_sizes(self, state_hash: StateHash) -> dict[str, int]:
        """Payload sizes from file metadata, without reading the blobs."""
        descriptor = self.read_descriptor(state_hash)
        payload_dir = self.state_dir(state_hash) / PAYLOAD_DIR
        return {
            name: (payload_dir / f"{name}{PAYLOAD_SUFFIX}").stat().st_size
            for name in sorted(descriptor.nonhashed_attribute_names)
        }

    def restore_state_full(self, state_hash: StateHash) -> tuple[StateDescriptor, Payloads]:
        """
        Load a complete state: its descriptor and every payload blob, byte-equal to what was saved.

        :raises StateNotFoundError: unknown or incomplete hash
        :raises CorruptStateError: the state fails validation or a blob is missing
        """
        status = self.state_status(state_hash)
        if status in (StateStatus.MISSING, StateStatus.INCOMPLETE):
            raise StateNotFoundError(f"State {state_hash} is not complete in the store ({status.value})")
        if status is StateStatus.CORRUPT:
            raise CorruptStateError(f"State {state_hash} fails validation")
        descriptor = self.read_descriptor(state_hash)
        payloads = {}
        for name in sorted(descriptor.nonhashed_attribute_names):
            try:
                payloads[name] = self._read_payload(state_hash, name)
            except FileNotFoundError:
                raise CorruptStateError(f"State {state_hash} is COMPLETE but payload `{name}` is missing") from None
        return descriptor, payloads

    def load_view(self, state_hash: StateHash) -> StateView:
        """A fresh, isolated view of a stored state. Every call deserializes from disk again."""
        descriptor, payloads = self.restore_state_full(state_hash)
        return StateView(descriptor, payloads)

    def state_hashes(self) -> list[StateHash]:
        """Hashes of every state directory (complete or not), ascending."""
        if not self.states_dir.is_dir():
            return []
        names = (entry.name for entry in self.states_dir.iterdir())
        return sorted(StateHash.from_hex(name) for name in names if _HASH_DIR.match(name))

    def complete_hashes(self) -> list[StateHash]:
        return [h for h in self.state_hashes() if (self.state_dir(h) / COMPLETE_MARKER).is_file()]

    def load_graph_slim(self) -> tuple[ExperimentGraph, LoadReport]:
        """
        Build the experiment graph from state.json files only. Payload blobs are never read.

        States that are incomplete, unreadable or invalid, or whose ancestors are missing, are left out of
        the graph and listed in the report.

        :raises NotAnExperimentError: no experiment.json
        """
        recorded_root = self.root_hash
        report = LoadReport()
        valid: dict[StateHash, StateDescriptor] = {}
        for state_hash in self.state_hashes():
            subject = state_hash.hex
            if not (self.state_dir(state_hash) / COMPLETE_MARKER).is_file():
                report.excluded.append(Violation(code=ViolationCode.INCOMPLETE, hash=subject, message="no COMPLETE"))
                continue
            try:
                descriptor = self.read_descriptor(state_hash)
            except Exception as e:
                report.excluded.append(Violation(code=ViolationCode.UNREADABLE, hash=subject, message=str(e)))
                continue
            if descriptor.hash != state_hash:
                report.excluded.append(
                    Violation(
                        code=ViolationCode.DIRECTORY_MISMATCH, hash=subject, message=f"stored {descriptor.hash.short}"
                    )
                )
                continue
            violations = validate_state(descriptor)
            if violations:
                report.excluded.extend(violations)
                continue
            valid[state_hash] = descriptor

        children: dict[StateHash, list[StateHash]] = {}
        roots = []
        for state_hash, descriptor in valid.items():
            if descriptor.parent_hash is None:
                roots.append(state_hash)
            else:
                children.setdefault(descriptor.parent_hash, []).append(state_hash)
        roots.sort(key=lambda h: (h != recorded_root, h))

        graph = ExperimentGraph(source=self)
        for extra_root in roots[1:]:
            report.excluded.append(
                Violation(code=ViolationCode.MULTI_ROOT, hash=extra_root.hex, message="extra root left out")
            )
        frontier = roots[:1]
        while frontier:
            state_hash = frontier.pop(0)
            graph.add_node(valid[state_hash])
            frontier.extend(sorted(children.get(state_hash, ())))

        for state_hash in sorted(set(valid) - set(graph.descriptors) - set(roots)):
            parent_hash = valid[state_hash].parent_hash
            report.excluded.append(
                Violation(
                    code=ViolationCode.DANGLING_EDGE,
                    hash=state_hash.hex,
                    message=f"parent {parent_hash.short} is missing or excluded",
                )
            )
        for violation in report.excluded:
            logger.warning(f"Excluded from graph: {violation}")
        return graph, report

    def digest(self) -> str:
        return directory_digest(self.path)


def directory_digest(path: Union[str, Path]) -> str:
    """
    SHA-256 over the relative paths and bytes of every file under `states/`, in sorted path order.

    Temporary writes and quarantined directories are ignored; experiment.json is left out because it
    records a creation time.
    """
    states_dir = Path(path) / STATES_DIR
    digest = hashlib.sha256()
    if not states_dir.is_dir():
        return digest.hexdigest()
    files = sorted(
        file
        for file in states_dir.rglob("*")
        if file.is_file() and not any(part.startswith(TMP_PREFIX) for part in file.relative_to(states_dir).parts)
    )
    for file in files:
        relative = file.relative_to(states_dir).as_posix().encode("utf-8")
        content = file.read_bytes()
        digest.update(len(relative).to_bytes(8, "big") + relative + len(content).to_bytes(8, "big") + content)
    return digest.hexdigest()
