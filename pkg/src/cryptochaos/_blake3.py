"""Pure-Python BLAKE3 (default hash mode, extendable output).

Follows the structure of the BLAKE3 reference implementation: chunk state,
parent nodes and an incremental CV stack. Only the unkeyed hash mode is
needed here. Throughput is low, which is fine for hashing 32-byte secrets.
"""

_MASK = 0xFFFFFFFF
OUT_LEN = 32
BLOCK_LEN = 64
CHUNK_LEN = 1024

CHUNK_START = 1 << 0
CHUNK_END = 1 << 1
PARENT = 1 << 2
ROOT = 1 << 3

IV = (
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
    0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
)
MSG_PERMUTATION = (2, 6, 3, 10, 7, 0, 4, 13, 1, 11, 12, 5, 9, 14, 15, 8)


def _rotr(x, n):
    return ((x >> n) | (x << (32 - n))) & _MASK


def _g(s, a, b, c, d, mx, my):
    s[a] = (s[a] + s[b] + mx) & _MASK
    s[d] = _rotr(s[d] ^ s[a], 16)
    s[c] = (s[c] + s[d]) & _MASK
    s[b] = _rotr(s[b] ^ s[c], 12)
    s[a] = (s[a] + s[b] + my) & _MASK
    s[d] = _rotr(s[d] ^ s[a], 8)
    s[c] = (s[c] + s[d]) & _MASK
    s[b] = _rotr(s[b] ^ s[c], 7)


def _round(s, m):
    _g(s, 0, 4, 8, 12, m[0], m[1])
    _g(s, 1, 5, 9, 13, m[2], m[3])
    _g(s, 2, 6, 10, 14, m[4], m[5])
    _g(s, 3, 7, 11, 15, m[6], m[7])
    _g(s, 0, 5, 10, 15, m[8], m[9])
    _g(s, 1, 6, 11, 12, m[10], m[11])
    _g(s, 2, 7, 8, 13, m[12], m[13])
    _g(s, 3, 4, 9, 14, m[14], m[15])


def _compress(cv, block_words, counter, block_len, flags):
    s = list(cv) + list(IV[:4]) + [
        counter & _MASK,
        (counter >> 32) & _MASK,
        block_len,
        flags,
    ]
    m = list(block_words)
    for r in range(7):
        _round(s, m)
        if r < 6:
            m = [m[i] for i in MSG_PERMUTATION]
    for i in range(8):
        s[i] ^= s[i + 8]
        s[i + 8] ^= cv[i]
    return s


def _words(block):
    block = block.ljust(BLOCK_LEN, b"\x00")
    return [int.from_bytes(block[i : i + 4], "little") for i in range(0, BLOCK_LEN, 4)]


class _Output:
    def __init__(self, cv, block_words, counter, block_len, flags):
        self.cv = cv
        self.block_words = block_words
        self.counter = counter
        self.block_len = block_len
        self.flags = flags

    def chaining_value(self):
        return _compress(
            self.cv, self.block_words, self.counter, self.block_len, self.flags
        )[:8]

    def root_bytes(self, length):
        out = bytearray()
        counter = 0
        while len(out) < length:
            words = _compress(
                self.cv, self.block_words, counter, self.block_len, self.flags | ROOT
            )
            out += b"".join(w.to_bytes(4, "little") for w in words)
            counter += 1
        return bytes(out[:length])


class _ChunkState:
    def __init__(self, key_words, chunk_counter, flags):
        self.cv = list(key_words)
        self.chunk_counter = chunk_counter
        self.block = b""
        self.blocks_compressed = 0
        self.flags = flags

    def __len__(self):
        return BLOCK_LEN * self.blocks_compressed + len(self.block)

    def _start_flag(self):
        return CHUNK_START if self.blocks_compressed == 0 else 0

    def update(self, data):
        while data:
            if len(self.block) == BLOCK_LEN:
                self.cv = _compress(
                    self.cv,
                    _words(self.block),
                    self.chunk_counter,
                    BLOCK_LEN,
                    self.flags | self._start_flag(),
                )[:8]
                self.blocks_compressed += 1
                self.block = b""
            take = BLOCK_LEN - len(self.block)
            self.block += data[:take]
            data = data[take:]

    def output(self):
        return _Output(
            self.cv,
            _words(self.block),
            self.chunk_counter,
            len(self.block),
            self.flags | self._start_flag() | CHUNK_END,
        )


def _parent_output(left, right, key_words, flags):
    return _Output(key_words, list(left) + list(right), 0, BLOCK_LEN, flags | PARENT)


class Blake3:
    """Incremental BLAKE3 hasher with ``update``/``digest``/``hexdigest``."""

    name = "blake3"
    digest_size = OUT_LEN

    def __init__(self, data=b""):
        self._key = IV
        self._flags = 0
        self._chunk = _ChunkState(IV, 0, 0)
        self._stack = []
        if data:
            self.update(data)

    def _add_chunk_cv(self, cv, total_chunks):
        while total_chunks & 1 == 0:
            cv = _parent_output(self._stack.pop(), cv, self._key, self._flags).chaining_value()
            total_chunks >>= 1
        self._stack.append(cv)

    def update(self, data):
        data = bytes(data)
        while data:
            if len(self._chunk) == CHUNK_LEN:
                cv = self._chunk.output().chaining_value()
                total = self._chunk.chunk_counter + 1
                self._add_chunk_cv(cv, total)
                self._chunk = _ChunkState(self._key, total, self._flags)
            take = CHUNK_LEN - len(self._chunk)
            self._chunk.update(data[:take])
            data = data[take:]
        return self

    def digest(self, length=OUT_LEN):
        out = self._chunk.output()
        for cv in reversed(self._stack):
            out = _parent_output(cv, out.chaining_value(), self._key, self._flags)
        return out.root_bytes(length)

    def hexdigest(self, length=OUT_LEN):
        return self.digest(length).hex()


def blake3(data=b""):
    return Blake3(data)
