import os

from dotenv import load_dotenv

load_dotenv()

SCHEMA_VERSION = 1
ENCODING_VERSION = 1

EXPERIMENT_FILE = "experiment.json"
STATES_DIR = "states"
QUARANTINE_DIR = "quarantine"
LOCKS_DIR = "locks"
STATE_FILE = "state.json"
PAYLOAD_DIR = "payload"
PAYLOAD_SUFFIX = ".bin"
COMPLETE_MARKER = "COMPLETE"
TMP_PREFIX = ".tmp-"

ROOT_HASH_PREFIX = b"sg-root:"
CHILD_HASH_PREFIX = b"sg-child:"

MIN_HASH_PREFIX = 4

LOG_LEVEL = os.environ.get("RECIPETREE_LOG_LEVEL", "WARNING")
