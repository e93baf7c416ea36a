"""Persistent translation cache.

Layout: one content-addressed value file per entry plus an append-only
index file. Writes are serialized and crash-safe (the value lands on disk
before its index line); readers never take the lock. A hit returns the
byte-identical prior result.
"""

import hashlib
import json
import os
import threading
import unicodedata


def content_hash(text):
    """SHA-256 of the NFC-normalized UTF-8 bytes."""
    return hashlib.sha256(unicodedata.normalize("NFC", text).encode("utf-8")).hexdigest()


def entry_key(backend_name, source_lang, target_lang, text):
    material = "\x00".join([backend_name, source_lang, target_lang, content_hash(text)])
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class TranslationCache:
    def __init__(self, directory):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self.index_path = os.path.join(directory, "index.jsonl")
        self._write_lock = threading.Lock()
        self._entries = {}
        if os.path.exists(self.index_path):
            with open(self.index_path, encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    self._entries[record["key"]] = record["file"]

    def _value_path(self, key):
        return os.path.join(self.directory, f"{key}.txt")

    def get(self, backend_name, source_lang, target_lang, text):
        key = entry_key(backend_name, source_lang, target_lang, text)
        filename = self._entries.get(key)
        if filename is None:
            return None
        with open(os.path.join(self.directory, filename), "rb") as handle:
            return handle.read().decode("utf-8")

    def put(self, backend_name, source_lang, target_lang, text, translation):
        key = entry_key(backend_name, source_lang, target_lang, text)
        with self._write_lock:
            if key in self._entries:
                return
            filename = f"{key}.txt"
            temp_path = self._value_path(key) + ".tmp"
            with open(temp_path, "wb") as handle:
                handle.write(translation.encode("utf-8"))
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(temp_path, self._value_path(key))
            with open(self.index_path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps({"key": key, "file": filename}) + "\n")
            self._entries[key] = filename

    def __len__(self):
        return len(self._entries)
