"""Translation backends: HTTP client, file-backed mock, identity, and
deterministic fault mocks, plus a caching wrapper.

HTTP wire contract: POST JSON {"text": [...], "source_lang": ...,
"target_lang": ...} and a {"translations": [...]} response; non-200,
timeouts, and length mismatches are retryable backend failures.
"""

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import requests

from .cache import TranslationCache
from .errors import BackendError, ContractViolation, InputFormatError


class TranslationBackend(ABC):
    """Batch translator; subclasses implement `_translate_chunk`.

    `deterministic` declares that identical inputs yield identical outputs;
    non-deterministic backends must be wrapped in a cache before use in
    reproducible evaluations. `batch_calls` counts chunk requests, which
    lets tests assert that warm caches make zero network calls.
    """

    name = "backend"
    deterministic = True
    max_batch = 32

    def __init__(self):
        self.batch_calls = 0

    def translate_batch(self, texts, source_lang, target_lang):
        if not texts:
            return []
        out = []
        for start in range(0, len(texts), self.max_batch):
            chunk = texts[start : start + self.max_batch]
            self.batch_calls += 1
            translated = self._translate_chunk(chunk, source_lang, target_lang)
            if len(translated) != len(chunk):
                raise BackendError(
                    f"backend {self.name!r} returned {len(translated)} items for "
                    f"a batch of {len(chunk)}"
                )
            out.extend(translated)
        return out

    @abstractmethod
    def _translate_chunk(self, texts, source_lang, target_lang):
        ...

    @property
    def supports_embedding(self):
        return False

    def embed(self, text):
        raise ContractViolation(f"backend {self.name!r} does not provide embeddings")


class IdentityBackend(TranslationBackend):
    name = "identity"

    def _translate_chunk(self, texts, source_lang, target_lang):
        return list(texts)


class DropLastWordBackend(TranslationBackend):
    """Deterministic degradation mock: removes the final word."""

    name = "drop_last_word"

    def _translate_chunk(self, texts, source_lang, target_lang):
        return [" ".join(text.split()[:-1]) for text in texts]


class WordReverseBackend(TranslationBackend):
    """Reverses word order; composing it with itself is the identity
    (modulo whitespace collapsing)."""

    name = "word_reverse"

    def _translate_chunk(self, texts, source_lang, target_lang):
        return [" ".join(reversed(text.split())) for text in texts]


class FileBackend(TranslationBackend):
    """Replays a fixed input -> output mapping from a two-column TSV file.

    Unmapped input is a backend failure, which doubles as deterministic
    fault injection in tests.
    """

    def __init__(self, mapping_path, name="file"):
        super().__init__()
        self.name = name
        self.mapping = {}
        with open(mapping_path, encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                columns = line.split("\t")
                if len(columns) != 2:
                    raise InputFormatError(
                        f"expected two tab-separated columns, got {len(columns)}",
                        line_number=line_number,
                    )
                self.mapping[columns[0]] = columns[1]

    def _translate_chunk(self, texts, source_lang, target_lang):
        missing = [text for text in texts if text not in self.mapping]
        if missing:
            raise BackendError(
                f"file backend {self.name!r} has no mapping for {missing[0]!r}"
            )
        return [self.mapping[text] for text in texts]


class HttpBackend(TranslationBackend):
    """Speaks the JSON wire contract against a translation gateway."""

    def __init__(
        self,
        endpoint,
        name="http",
        auth_env_var=None,
        timeout=30.0,
        max_batch=32,
        session=None,
    ):
        super().__init__()
        self.name = name
        self.endpoint = endpoint
        self.auth_env_var = auth_env_var
        self.timeout = timeout
        self.max_batch = max_batch
        self.session = session or requests.Session()

    def _headers(self):
        headers = {"Content-Type": "application/json"}
        if self.auth_env_var:
            token = os.environ.get(self.auth_env_var)
            if not token:
                raise ContractViolation(
                    f"auth environment variable {self.auth_env_var!r} is not set"
                )
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _translate_chunk(self, texts, source_lang, target_lang):
        payload = {
            "text": list(texts),
            "source_lang": source_lang,
            "target_lang": target_lang,
        }
        try:
            response = self.session.post(
                self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise BackendError(f"backend {self.name!r}: request failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendError(
                f"backend {self.name!r}: HTTP {response.status_code} from {self.endpoint}"
            )
        try:
            translations = response.json()["translations"]
        except (ValueError, KeyError) as exc:
            raise BackendError(f"backend {self.name!r}: malformed response body") from exc
        if not isinstance(translations, list):
            raise BackendError(f"backend {self.name!r}: 'translations' is not a list")
        return [str(item) for item in translations]


class CachingBackend(TranslationBackend):
    """Consults the persistent cache before the wrapped backend.

    Cache keys use the wrapped backend's name, so a cache survives
    re-wrapping. The wrapper is deterministic by construction.
    """

    def __init__(self, inner: TranslationBackend, cache: TranslationCache):
        super().__init__()
        self.inner = inner
        self.cache = cache
        self.name = inner.name
        self.max_batch = inner.max_batch

    def translate_batch(self, texts, source_lang, target_lang):
        results = [None] * len(texts)
        misses = []
        for position, text in enumerate(texts):
            hit = self.cache.get(self.inner.name, source_lang, target_lang, text)
            if hit is None:
                misses.append(position)
            else:
                results[position] = hit
        if misses:
            translated = self.inner.translate_batch(
                [texts[p] for p in misses], source_lang, target_lang
            )
            for position, text_out in zip(misses, translated):
                self.cache.put(
                    self.inner.name, source_lang, target_lang, texts[position], text_out
                )
                results[position] = text_out
        return results

    def _translate_chunk(self, texts, source_lang, target_lang):  # pragma: no cover
        raise AssertionError("CachingBackend overrides translate_batch directly")

    @property
    def supports_embedding(self):
        return self.inner.supports_embedding

    def embed(self, text):
        return self.inner.embed(text)


class BackendKind(str, Enum):
    HTTP = "http"
    FILE = "file"
    IDENTITY = "identity"
    DROP_LAST_WORD = "drop_last_word"
    WORD_REVERSE = "word_reverse"


@dataclass(frozen=True)
class BackendConfig:
    kind: BackendKind
    name: Optional[str] = None
    endpoint: Optional[str] = None
    auth_env_var: Optional[str] = None
    mapping_path: Optional[str] = None
    timeout: float = 30.0
    max_in_flight: int = 4
    batch_size: int = 32

    def __post_init__(self):
        if self.kind is BackendKind.HTTP and not self.endpoint:
            raise ContractViolation("http backend requires an endpoint")
        if self.kind is BackendKind.FILE and not self.mapping_path:
            raise ContractViolation("file backend requires a mapping_path")
        if self.max_in_flight < 1:
            raise ContractViolation("max_in_flight must be a positive integer")


def build_backend(config: BackendConfig) -> TranslationBackend:
    if config.kind is BackendKind.IDENTITY:
        backend = IdentityBackend()
    elif config.kind is BackendKind.DROP_LAST_WORD:
        backend = DropLastWordBackend()
    elif config.kind is BackendKind.WORD_REVERSE:
        backend = WordReverseBackend()
    elif config.kind is BackendKind.FILE:
        backend = FileBackend(config.mapping_path, name=config.name or "file")
    else:
        backend = HttpBackend(
            config.endpoint,
            name=config.name or "http",
            auth_env_var=config.auth_env_var,
            timeout=config.timeout,
            max_batch=config.batch_size,
        )
    if config.name:
        backend.name = config.name
    return backend
