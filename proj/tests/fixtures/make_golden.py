#!/usr/bin/env python3
"""Regenerates golden.json: canonical encodings, ids and signatures computed
with hashlib, json and the cryptography package."""

import hashlib
import json
import pathlib

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat


def canon(value):
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha(data):
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


class Key:
    def __init__(self, passphrase):
        self.passphrase = passphrase
        self.seed = hashlib.sha256(passphrase.encode()).digest()
        self.private = Ed25519PrivateKey.from_private_bytes(self.seed)
        self.public = self.private.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
        self.address = "0x" + hashlib.sha256(self.public).digest()[-20:].hex()

    def sign(self, digest_hex):
        return self.private.sign(bytes.fromhex(digest_hex)).hex()


def transaction(signer, machine, operation, timestamp, payload):
    unsigned = {
        "version": 1,
        "transaction": {
            "service_provider": signer.address,
            "machine": machine.address,
            "operation": operation,
            "timestamp": timestamp,
            "data": {"hash": sha(canon(payload)), "payload": payload},
        },
    }
    tx_id = sha(canon(unsigned))
    signed = dict(unsigned, id=tx_id, signature=signer.sign(tx_id))
    return {
        "signer": signer.passphrase,
        "machine": machine.passphrase,
        "operation": operation,
        "timestamp": timestamp,
        "payload": payload,
        "unsigned": canon(unsigned),
        "data_hash": unsigned["transaction"]["data"]["hash"],
        "id": tx_id,
        "signature": signed["signature"],
        "encoded": canon(signed),
    }


def main():
    alice = Key("golden/alice")
    mill = Key("golden/mill-07")
    sealer = Key("golden/authority-0")

    keys = [{"passphrase": k.passphrase, "seed": k.seed.hex(), "public_key": k.public.hex(), "address": k.address}
            for k in (alice, mill, sealer, Key(""))]

    txs = [
        transaction(alice, mill, "Create", 1_700_000_000_000,
                    {"action": "create", "machine_name": "Haas VF-2", "description": "vertical mill, bay 3"}),
        transaction(mill, mill, "Utilization", 1_700_000_360_000,
                    {"oee": 0.75, "uptime_minutes": 270, "power_kwh": 12.5, "state": "WORKING",
                     "duration_minutes": 360,
                     "events": [{"at": 1, "state": "ON", "duration_minutes": 90},
                                {"at": 2, "state": "WORKING", "duration_minutes": 180},
                                {"at": 3, "state": "OFF", "duration_minutes": 90}]}),
        transaction(alice, alice, "Capability", 42,
                    {"materials": ["Al-6061", "Ti-6Al-4V"], "feature_classes": ["pocket"], "tolerance_um": 12.5}),
        transaction(alice, alice, "ContractCall", 43,
                    {"method": "app.bid", "args": {"data": "LED-ON zone=été", "qty": 3}}),
    ]

    parent = sha("golden parent")
    state_root = sha("golden state")
    tx_root = hashlib.sha256(b"".join(bytes.fromhex(t["id"]) for t in txs)).hexdigest()
    header = {"prev_block": parent, "height": 7, "timestamp": 1_700_000_400_000, "tx_root": tx_root,
              "node_pubkey": sealer.public.hex(), "state_root": state_root, "nonce": 5, "difficulty": 2}
    block_id = sha(canon(header))
    block = {
        "parent": parent,
        "sealer": sealer.passphrase,
        "state_root": state_root,
        "height": 7,
        "timestamp": header["timestamp"],
        "nonce": 5,
        "difficulty": 2,
        "tx_root": tx_root,
        "empty_tx_root": hashlib.sha256(b"").hexdigest(),
        "header": canon(header),
        "id": block_id,
        "signature": sealer.sign(block_id),
    }

    out = {"keys": keys, "transactions": txs, "block": block}
    path = pathlib.Path(__file__).with_name("golden.json")
    path.write_text(json.dumps(out, indent=2, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
