"""Deterministic synthetic scenario used by fixtures and acceptance tests.

One evening of staged intrusions against three victims:

* 10.0.0.20 is hit by 10.0.254.202/.204/.206. Two different routes end in
  data exfiltration over remoteware-cl and a third exfiltrates mongodb (the
  MongoDB numeration signature); the mongodb attacker also floods http and
  drops a trojan.
* 10.0.0.21 carries the exfiltration-over-http paths; every one of them
  passes root privilege escalation (CodeRed / ColdFusion signatures) and
  SQL-injection data manipulation before the exfil node. Extra noise pairs
  (including attacker 10.0.254.103) add denial-of-service routes.
* 10.0.0.22 is attacked after hours by 10.0.254.202 over etlservicemgr,
  escalating root privileges into resource hijacking, arbitrary code
  execution, data manipulation, and a final exfiltration whose last alert
  lands at exactly 01:40:00.
"""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone

DAY = datetime(2018, 11, 3, tzinfo=timezone.utc)

# Analysis options the scenario is tuned for.
GAP_SECONDS = 300.0
MERGE_MIN_COUNT = 1

SIG = {
    "scan_nikto": ("ET SCAN Nikto Web App Scan in Progress", 2009357, "Detection of a Network Scan"),
    "scan_nmap": ("ET SCAN Nmap Scripting Engine User-Agent Detected", 2024364, "Detection of a Network Scan"),
    "vuln_coldfusion": ("ET WEB_SERVER ColdFusion path disclosure attempt", 2016184, "access to a potentially vulnerable web application"),
    "info_listing": ("ET INFO Remote Directory Listing Retrieved", 2101234, "Attempted Information Leak"),
    "info_mongodb": ("ET INFO MongoDB Unauthenticated Access", 2018887, "Attempted Information Leak"),
    "acct_creation": ("ETPRO WEB_SERVER Admin Account Creation Attempt", 2830001, "Misc activity"),
    "upe_php": ("ET WEB_SERVER PHP Possible User Privilege Gain attempt", 2101098, "Attempted User Privilege Gain"),
    "rpe_codered": ("GPL EXPLOIT CodeRed v2 root.exe access", 1256, "Attempted Administrator Privilege Gain"),
    "rpe_coldfusion": ("ET WEB_SERVER ColdFusion administrator access", 2016183, "Attempted Administrator Privilege Gain"),
    "rpe_mongodb": ("ET EXPLOIT MongoDB nativeHelper.apply Remote Code Execution", 2016822, "Attempted Administrator Privilege Gain"),
    "dm_sqli": ("ET WEB_SERVER Possible SQL Injection UPDATE statement in URI", 2010963, "Misc activity"),
    "de_dump": ("ET ATTACK_RESPONSE Possible Database Dump Download", 2101876, "Potential Corporate Privacy Violation"),
    "de_mongodb": ("ETPRO ATTACK_RESPONSE MongoDB Database numeration Request", 2830123, "Misc activity"),
    "dos_slowloris": ("ET DOS Possible Slowloris Attack Detected", 2019644, "Attempted Denial of Service"),
    "dd_dropper": ("ET MALWARE Win32 Trojan Dropper Download Detected", 2830456, "A Network Trojan was detected"),
    "rh_mining": ("ET POLICY Crypto Currency Mining Stratum Protocol Detected", 2027397, "Misc activity"),
    "ace_shellcode": ("ET SHELLCODE x86 inc ebx NOOP Shellcode Detected", 2103000, "Executable code was detected"),
    "bf_ssh": ("ET SCAN LibSSH Brute Force Attempts", 2101999, "Attempted Account Compromise"),
}

PORT = {"remoteware-cl": 3000, "mongodb": 27017, "http": 80, "etlservicemgr": 5026}

A202, A204, A206, A103 = "10.0.254.202", "10.0.254.204", "10.0.254.206", "10.0.254.103"
V20, V21, V22 = "10.0.0.20", "10.0.0.21", "10.0.0.22"


def _burst(records, attacker, victim, port, sigs, hh, mm, count, spacing=15.0, ss=0):
    """Append one burst; sigs cycle when more than one is given."""
    start = DAY + timedelta(hours=hh, minutes=mm, seconds=ss)
    for i in range(count):
        signature, sid, category = SIG[sigs[i % len(sigs)]]
        ts = start + timedelta(seconds=i * spacing)
        records.append(
            {
                "timestamp": ts.isoformat(),
                "event_type": "alert",
                "src_ip": attacker,
                "dest_ip": victim,
                "dest_port": port,
                "proto": "TCP",
                "alert": {"signature": signature, "signature_id": sid, "category": category},
            }
        )


def usecase_records() -> list[dict]:
    r: list[dict] = []
    rw, mdb, http, etl = PORT["remoteware-cl"], PORT["mongodb"], PORT["http"], PORT["etlservicemgr"]

    # .202 -> .20 over remoteware-cl: scan, account manipulation, user priv
    # esc, SQL-injection manipulation, exfiltration.
    _burst(r, A202, V20, rw, ["scan_nikto", "scan_nmap"], 22, 0, 6)
    _burst(r, A202, V20, rw, ["acct_creation"], 22, 10, 4)
    _burst(r, A202, V20, rw, ["upe_php"], 22, 20, 4)
    _burst(r, A202, V20, rw, ["dm_sqli"], 22, 30, 5)
    _burst(r, A202, V20, rw, ["de_dump"], 22, 40, 6)

    # .204 -> .20 over remoteware-cl: a second, different route to the same
    # exfiltration objective (no manipulation step).
    _burst(r, A204, V20, rw, ["scan_nmap"], 22, 2, 5)
    _burst(r, A204, V20, rw, ["info_listing"], 22, 12, 4)
    _burst(r, A204, V20, rw, ["upe_php"], 22, 22, 4)
    _burst(r, A204, V20, rw, ["de_dump"], 22, 42, 5)

    # .206 -> .20: mongodb enumeration route, then http DoS and a dropper.
    _burst(r, A206, V20, mdb, ["scan_nmap"], 22, 5, 6)
    _burst(r, A206, V20, mdb, ["info_mongodb"], 22, 15, 5)
    _burst(r, A206, V20, mdb, ["rpe_mongodb"], 22, 25, 5)
    _burst(r, A206, V20, mdb, ["dm_sqli"], 22, 35, 5)
    _burst(r, A206, V20, mdb, ["de_mongodb"], 22, 45, 6)
    _burst(r, A206, V20, http, ["dos_slowloris"], 23, 0, 30, spacing=8)
    _burst(r, A206, V20, http, ["dd_dropper"], 23, 10, 8)

    # .202 -> .21 over http: the CodeRed / ColdFusion escalation route.
    _burst(r, A202, V21, http, ["scan_nikto"], 22, 6, 6)
    _burst(r, A202, V21, http, ["vuln_coldfusion"], 22, 16, 4)
    _burst(r, A202, V21, http, ["rpe_codered", "rpe_coldfusion"], 22, 26, 6)
    _burst(r, A202, V21, http, ["dm_sqli"], 22, 36, 5)
    _burst(r, A202, V21, http, ["de_dump"], 22, 46, 7)

    # .204 -> .21 over http: variant route, still escalates and manipulates
    # before exfiltration.
    _burst(r, A204, V21, http, ["scan_nikto"], 22, 8, 5)
    _burst(r, A204, V21, http, ["acct_creation"], 22, 18, 4)
    _burst(r, A204, V21, http, ["rpe_codered", "rpe_coldfusion"], 22, 28, 5)
    _burst(r, A204, V21, http, ["dm_sqli"], 22, 38, 4)
    _burst(r, A204, V21, http, ["de_dump"], 22, 48, 6)

    # .202 -> .22 after hours over etlservicemgr; the exfiltration burst ends
    # at exactly 01:40:00.
    _burst(r, A202, V22, etl, ["scan_nmap"], 24, 30, 5)
    _burst(r, A202, V22, etl, ["rpe_codered", "rpe_coldfusion"], 24, 45, 5)
    _burst(r, A202, V22, etl, ["rh_mining"], 24, 55, 5)
    _burst(r, A202, V22, etl, ["ace_shellcode"], 25, 5, 5)
    _burst(r, A202, V22, etl, ["dm_sqli"], 25, 15, 5)
    _burst(r, A202, V22, etl, ["de_dump"], 25, 30, 6, spacing=120)

    # Noise pairs: standalone denial-of-service routes on other victims.
    _burst(r, A206, V21, http, ["dos_slowloris"], 23, 5, 25, spacing=8)
    _burst(r, A206, V22, http, ["dd_dropper"], 23, 0, 6)
    _burst(r, A206, V22, http, ["dos_slowloris"], 23, 12, 20, spacing=8)
    _burst(r, A204, V22, http, ["info_listing"], 23, 2, 4)
    _burst(r, A204, V22, http, ["dos_slowloris"], 23, 15, 18, spacing=8)
    _burst(r, A103, V21, http, ["bf_ssh"], 23, 4, 6)
    _burst(r, A103, V21, http, ["dos_slowloris"], 23, 18, 15, spacing=8)

    # Two non-alert records; the parser ignores them without counting skips.
    r.append({"timestamp": (DAY + timedelta(hours=22)).isoformat(), "event_type": "flow",
              "src_ip": A202, "dest_ip": V20, "dest_port": rw})
    r.append({"timestamp": (DAY + timedelta(hours=23)).isoformat(), "event_type": "dns",
              "src_ip": A206, "dest_ip": V20, "dest_port": 53})
    return r


def usecase_bytes() -> bytes:
    return ("\n".join(json.dumps(rec) for rec in usecase_records()) + "\n").encode("utf-8")


ALERT_TOTAL = 285  # alert records (non-alert event types excluded)
