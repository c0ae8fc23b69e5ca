#!/usr/bin/env python3
"""Writes the committed fixture archive under crates/wikitools/fixtures/.

The archive is a hand-maintained snapshot: every envelope carries a body in
the exact wire format of the MediaWiki action API (formatversion=2), the
Wikidata wbgetentities module, or the Pageviews REST API, keyed the same way
the Rust transport keys requests. Lists are trimmed to a readable size and
counts are synthetic, generated from a fixed seed.

    python3 scripts/snapshot_fixtures.py [--out DIR]

Re-running is idempotent; stale envelopes are removed.
"""

import argparse
import datetime as dt
import hashlib
import json
import pathlib
import random
import urllib.parse

WIKIPEDIA = "https://{language}.wikipedia.org/w/api.php"
WIKIDATA = "https://www.wikidata.org/w/api.php"
PAGEVIEWS = "https://wikimedia.org/api/rest_v1"

JSON_UTF8 = "application/json; charset=utf-8"


def quote(s):
    return urllib.parse.quote(s, safe="-._~")


def request_url(endpoint, segments=(), params=None):
    url = endpoint.rstrip("/")
    for seg in segments:
        url += "/" + quote(seg)
    pairs = sorted((quote(k), quote(v)) for k, v in (params or {}).items())
    if pairs:
        url += "?" + "&".join(f"{k}={v}" for k, v in pairs)
    return url


def request_title(title):
    return "".join("_" if c.isspace() else c for c in title)


class Archive:
    def __init__(self):
        self.envelopes = {}

    def add(self, url, body, status=200, content_type=JSON_UTF8):
        key = hashlib.sha256(("GET " + url).encode()).hexdigest()
        text = body if isinstance(body, str) else json.dumps(body, ensure_ascii=False, separators=(",", ":"))
        env = {
            "key": key,
            "method": "GET",
            "url": url,
            "status": status,
            "content_type": content_type,
            "body": text,
        }
        if key in self.envelopes and self.envelopes[key] != env:
            raise SystemExit(f"conflicting fixture for {url}")
        self.envelopes[key] = env

    def write(self, out):
        out.mkdir(parents=True, exist_ok=True)
        for old in out.glob("*.json"):
            if old.stem not in self.envelopes:
                old.unlink()
        for key, env in sorted(self.envelopes.items()):
            text = json.dumps(env, ensure_ascii=False, indent=2) + "\n"
            (out / f"{key}.json").write_text(text, encoding="utf-8")


A = Archive()
RNG = random.Random(20160113)
_pageids = {}


def pageid(lang, title):
    return _pageids.setdefault((lang, title), 10_000 + len(_pageids) * 7919 % 9_000_000)


# --- MediaWiki -------------------------------------------------------------


def mw(lang, params, body):
    full = {"action": "query", "format": "json", "formatversion": "2", **params}
    A.add(request_url(WIKIPEDIA.format(language=lang), params=full), body)


def normalized(title):
    rt = request_title(title)
    if rt == title:
        return {}
    return {"normalized": [{"fromencoded": False, "from": rt, "to": title}]}


def page_query(lang, title, module_params, key, records, pages=1):
    """prop= module, optionally split over continuation pages."""
    chunks = split(records, pages)
    cont = {}
    for i, chunk in enumerate(chunks):
        page = {"pageid": pageid(lang, title), "ns": 0, "title": title}
        if chunk:
            page[key] = chunk
        body = {"batchcomplete": True} if i == len(chunks) - 1 else {}
        if i < len(chunks) - 1:
            token = f"{pageid(lang, title)}|0|{chunks[i + 1][0].get('title', '')}"
            body["continue"] = {module_params["_cont"]: token, "continue": "||"}
        body["query"] = {**normalized(title), "pages": [page]}
        params = {k: v for k, v in module_params.items() if k != "_cont"}
        params["titles"] = request_title(title)
        mw(lang, {**params, **cont}, body)
        if i < len(chunks) - 1:
            cont = body["continue"]


def list_query(lang, params, key, records, cont_key, pages=1):
    chunks = split(records, pages)
    cont = {}
    for i, chunk in enumerate(chunks):
        body = {"batchcomplete": True}
        if i < len(chunks) - 1:
            body["continue"] = {cont_key: f"0|{pageid(lang, chunks[i + 1][0]['title'])}", "continue": "-||"}
        body["query"] = {key: chunk}
        mw(lang, {**params, **cont}, body)
        if i < len(chunks) - 1:
            cont = body["continue"]


def split(records, pages):
    if pages <= 1 or not records:
        return [records]
    size = -(-len(records) // pages)
    return [records[i:i + size] for i in range(0, len(records), size)]


def langlinks(lang, title, links):
    page_query(
        lang, title, {"prop": "langlinks", "lllimit": "max", "_cont": "llcontinue"}, "langlinks",
        [{"lang": l, "title": t} for l, t in links],
    )


def backlinks(lang, title, titles, redirects, pages=1):
    params = {
        "list": "backlinks",
        "bltitle": request_title(title),
        "blnamespace": "0",
        "blfilterredir": "redirects" if redirects else "nonredirects",
        "bllimit": "max",
    }
    records = []
    for t in titles:
        r = {"pageid": pageid(lang, t), "ns": 0, "title": t}
        if redirects:
            r["redirect"] = True
        records.append(r)
    list_query(lang, params, "backlinks", records, "blcontinue", pages)


def outbound(lang, title, titles, pages=1):
    page_query(
        lang, title, {"prop": "links", "plnamespace": "0", "pllimit": "max", "_cont": "plcontinue"}, "links",
        [{"ns": 0, "title": t} for t in titles], pages,
    )


def members(lang, category, titles, ns):
    params = {
        "list": "categorymembers",
        "cmtitle": request_title(category),
        "cmnamespace": str(ns),
        "cmlimit": "max",
    }
    records = [{"pageid": pageid(lang, t), "ns": ns, "title": t} for t in titles]
    list_query(lang, params, "categorymembers", records, "cmcontinue")


def coordinates(lang, title, lat, lon):
    page_query(
        lang, title, {"prop": "coordinates", "_cont": "cocontinue"}, "coordinates",
        [{"lat": lat, "lon": lon, "primary": True, "globe": "earth"}],
    )


def revisions(lang, title, start, end, stamps):
    params = {
        "prop": "revisions",
        "rvprop": "timestamp",
        "rvlimit": "max",
        "rvdir": "newer",
        "rvstart": f"{start}T00:00:00Z",
        "rvend": f"{end}T23:59:59Z",
        "_cont": "rvcontinue",
    }
    page_query(lang, title, params, "revisions", [{"timestamp": s} for s in stamps])


# --- Wikidata --------------------------------------------------------------


def wd(params, body):
    A.add(request_url(WIKIDATA, params={"action": "wbgetentities", "format": "json", **params}), body)


def id_key(eid):
    return (0 if eid[0] == "Q" else 1, int(eid[1:]))


LABELS = {}


def label(eid, en, **others):
    LABELS[eid] = {"en": en, **others}


def entity(lang, title, qid, claims):
    """Registers sitelink lookup, claims, and label batches for one item."""
    site = lang.replace("-", "_") + "wiki"
    wd(
        {"sites": site, "titles": request_title(title), "props": "info"},
        {
            "entities": {
                qid: {
                    "type": "item",
                    "id": qid,
                    "title": qid,
                    "pageid": 100_000 + int(qid[1:]) % 900_000,
                    "ns": 0,
                    "lastrevid": 300_000_000 + int(qid[1:]) % 99_999,
                    "modified": "2016-02-01T09:30:00Z",
                }
            },
            "success": 1,
        },
    )
    wire = {}
    for prop, values in claims.items():
        wire[prop] = [statement(qid, prop, i, v) for i, v in enumerate(values)]
    wd({"ids": qid, "props": "claims"}, {"entities": {qid: {"type": "item", "id": qid, "claims": wire}}, "success": 1})

    # Labels for what survives simplification: properties with one value snak
    # and the items they point to.
    wanted = set()
    for prop, values in claims.items():
        real = [v for v in values if v[0] != "somevalue" and v[0] != "novalue"]
        if len(real) != 1:
            continue
        wanted.add(prop)
        if real[0][0] == "item":
            wanted.add(real[0][1])
    if not wanted:
        return
    ids = sorted(wanted, key=id_key)
    languages = "en" if lang == "en" else f"{lang}|en"
    for i in range(0, len(ids), 50):
        chunk = ids[i:i + 50]
        ents = {}
        for eid in chunk:
            known = LABELS.get(eid, {})
            labels = {
                l: {"language": l, "value": known[l]}
                for l in languages.split("|")
                if l in known
            }
            ents[eid] = {"type": "property" if eid[0] == "P" else "item", "id": eid, "labels": labels}
        wd({"ids": "|".join(chunk), "props": "labels", "languages": languages}, {"entities": ents, "success": 1})


def statement(qid, prop, i, v):
    kind = v[0]
    snak = {"snaktype": "value", "property": prop}
    if kind in ("somevalue", "novalue"):
        snak = {"snaktype": kind, "property": prop, "datatype": v[1] if len(v) > 1 else "string"}
    elif kind == "item":
        snak["datavalue"] = {
            "value": {"entity-type": "item", "numeric-id": int(v[1][1:]), "id": v[1]},
            "type": "wikibase-entityid",
        }
        snak["datatype"] = "wikibase-item"
    elif kind == "string":
        snak["datavalue"] = {"value": v[1], "type": "string"}
        snak["datatype"] = "external-id" if prop == "P300" else "string"
    elif kind == "image":
        snak["datavalue"] = {"value": v[1], "type": "string"}
        snak["datatype"] = "commonsMedia"
    elif kind == "url":
        snak["datavalue"] = {"value": v[1], "type": "string"}
        snak["datatype"] = "url"
    elif kind == "quantity":
        value = {"amount": v[1], "unit": v[2] if len(v) > 2 else "1"}
        snak["datavalue"] = {"value": value, "type": "quantity"}
        snak["datatype"] = "quantity"
    elif kind == "time":
        snak["datavalue"] = {
            "value": {
                "time": v[1],
                "timezone": 0,
                "before": 0,
                "after": 0,
                "precision": v[2],
                "calendarmodel": "http://www.wikidata.org/entity/Q1985727",
            },
            "type": "time",
        }
        snak["datatype"] = "time"
    elif kind == "coord":
        snak["datavalue"] = {
            "value": {
                "latitude": v[1],
                "longitude": v[2],
                "altitude": None,
                "precision": 0.0002777777777777778,
                "globe": "http://www.wikidata.org/entity/Q2",
            },
            "type": "globecoordinate",
        }
        snak["datatype"] = "globe-coordinate"
    elif kind == "mono":
        snak["datavalue"] = {"value": {"text": v[1], "language": v[2]}, "type": "monolingualtext"}
        snak["datatype"] = "monolingualtext"
    else:
        raise ValueError(kind)
    return {
        "mainsnak": snak,
        "type": "statement",
        "id": f"{qid}${hashlib.md5(f'{qid}{prop}{i}'.encode()).hexdigest()[:8].upper()}",
        "rank": "normal",
    }


METRE = "http://www.wikidata.org/entity/Q11573"

# --- Pageviews -------------------------------------------------------------


def days(start, end):
    d = start
    while d <= end:
        yield d
        d += dt.timedelta(days=1)


def pageviews(lang, title, start, end, counts, omit_zero=True):
    rt = request_title(title)
    segs = [
        "metrics", "pageviews", "per-article", f"{lang}.wikipedia", "all-access", "user", rt, "daily",
        start.strftime("%Y%m%d"), end.strftime("%Y%m%d"),
    ]
    items = []
    for d, n in zip(days(start, end), counts):
        if n == 0 and omit_zero:
            continue
        items.append({
            "project": f"{lang}.wikipedia",
            "article": rt,
            "granularity": "daily",
            "timestamp": d.strftime("%Y%m%d") + "00",
            "access": "all-access",
            "agent": "user",
            "views": n,
        })
    A.add(request_url(PAGEVIEWS, segs), {"items": items})


def pageviews_missing(lang, title, start, end):
    rt = request_title(title)
    segs = [
        "metrics", "pageviews", "per-article", f"{lang}.wikipedia", "all-access", "user", rt, "daily",
        start.strftime("%Y%m%d"), end.strftime("%Y%m%d"),
    ]
    body = {
        "type": "https://mediawiki.org/wiki/HyperSwitch/errors/not_found",
        "title": "Not found.",
        "method": "get",
        "detail": "The date(s) you used are valid, but we either do not have data for those date(s), "
                  "or the project you asked for is not loaded yet. Please check documentation for more information.",
        "uri": "/analytics.wikimedia.org/v1/pageviews/per-article/" + "/".join(segs[3:]),
    }
    A.add(request_url(PAGEVIEWS, segs), body, status=404, content_type="application/problem+json")


def noisy(base, n, spread=0.12):
    return [max(0, int(round(b * (1 + RNG.uniform(-spread, spread))))) for b in (base if isinstance(base, list) else [base] * n)]


JAN_1 = dt.date(2016, 1, 1)
JAN_31 = dt.date(2016, 1, 31)

# --- Berlin ----------------------------------------------------------------

BERLIN_LANGS = [
    ("de", "Berlin"), ("es", "Berlín"), ("fr", "Berlin"), ("it", "Berlino"), ("ja", "ベルリン"),
    ("nl", "Berlijn"), ("pl", "Berlin"), ("pt", "Berlim"), ("ru", "Берлин"), ("sv", "Berlin"),
    ("tr", "Berlin"), ("zh", "柏林"),
]
BERLIN_REDIRECTS = {
    "en": ["Berlin, Germany", "Berlin (Germany)", "City of Berlin", "Land Berlin", "State of Berlin",
           "Berlin, Deutschland", "Berolina", "Capital of Germany", "Berlin city"],
    "de": ["Berlin (Deutschland)", "Bundeshauptstadt Berlin", "Land Berlin", "Berolina", "Berlin-Stadt",
           "Hauptstadt der DDR"],
    "es": ["Berlin", "Berlín (Alemania)", "Estado de Berlín"],
    "fr": ["Berlin (Allemagne)", "Land de Berlin", "Berlinois"],
    "it": ["Berlin", "Berlino (Germania)"],
    "ja": ["ベルリン市", "ベルリン州"],
    "nl": ["Berlin", "Berlijn (stad)"],
    "pl": ["Berlin (Niemcy)", "Berlinie"],
    "pt": ["Berlin", "Berlim (Alemanha)"],
    "ru": ["Берлин (город)", "Берлин (Германия)"],
    "sv": [],
    "tr": ["Berlin, Almanya"],
    "zh": ["柏林市", "伯林"],
}
BERLIN_OUT = [
    "Alexanderplatz", "Berlin Brandenburg Airport", "Berlin Hauptbahnhof", "Berlin Wall", "Brandenburg",
    "Brandenburg Gate", "Bundestag", "Charlottenburg", "East Berlin", "European Union", "Fall of the Berlin Wall",
    "Friedrichshain-Kreuzberg", "Germany", "Havel", "Humboldt University of Berlin", "Kreuzberg",
    "List of cities in Germany by population", "Museum Island", "Potsdam", "Potsdamer Platz", "Prussia",
    "Reichstag building", "Spree", "Tegel", "Tiergarten (park)", "West Berlin",
]
BERLIN_IN = [
    "Adolf Hitler", "Albert Einstein", "Alexanderplatz", "Berlin Brandenburg Airport", "Berlin Marathon",
    "Berlin Wall", "Berlin International Film Festival", "Brandenburg", "Brandenburg Gate", "Cold War",
    "David Bowie", "East Berlin", "East Germany", "Fall of the Berlin Wall", "Germany", "Hertha BSC",
    "Kreuzberg", "Marlene Dietrich", "Museum Island", "Potsdam", "Potsdamer Platz", "Prussia",
    "Reichstag building", "Spree", "Treaty of Berlin (1878)", "West Berlin", "World War II",
]


def berlin():
    langlinks("en", "Berlin", BERLIN_LANGS)
    backlinks("en", "Berlin", BERLIN_REDIRECTS["en"], redirects=True)
    for lang, title in BERLIN_LANGS:
        backlinks(lang, title, BERLIN_REDIRECTS[lang], redirects=True)
    backlinks("en", "Berlin", BERLIN_IN, redirects=False, pages=2)
    outbound("en", "Berlin", BERLIN_OUT, pages=2)
    coordinates("en", "Berlin", 52.52, 13.405)
    revisions("en", "Berlin", "2016-01-01", "2016-01-07", [
        "2016-01-01T08:12:44Z", "2016-01-01T19:03:10Z", "2016-01-03T11:45:00Z", "2016-01-04T06:20:31Z",
        "2016-01-04T06:22:05Z", "2016-01-04T23:59:59Z", "2016-01-06T14:00:12Z",
    ])

    label("P17", "country", de="Staat")
    label("P18", "image", de="Bild")
    label("P47", "shares border with", de="grenzt an")
    label("P300", "ISO 3166-2 code", de="ISO-3166-2-Code")
    label("P571", "inception", de="Gründung, Erstellung bzw. Entstehung")
    label("P625", "coordinate location", de="geographische Koordinaten")
    label("P856", "official website", de="offizielle Website")
    label("P1376", "capital of", de="Hauptstadt von")
    label("P1448", "official name", de="offizieller Name")
    label("P2044", "elevation above sea level", de="Höhe über dem Meeresspiegel")
    label("P6", "head of government", de="Regierungschef")
    label("P1082", "population", de="Einwohnerzahl")
    label("Q183", "Germany", de="Deutschland")
    label("Q1208", "Brandenburg", de="Brandenburg")
    claims = {
        "P6": [("item", "Q56564"), ("item", "Q1733")],
        "P17": [("item", "Q183")],
        "P18": [("image", "Siegessaeule Aussicht 10-13 img4 Tiergarten.jpg")],
        "P47": [("item", "Q1208")],
        "P150": [("item", f"Q{n}") for n in (2_561, 2_563, 2_566, 2_567, 2_568, 2_569)],
        "P300": [("string", "DE-BE")],
        "P571": [("time", "+1237-00-00T00:00:00Z", 9)],
        "P625": [("coord", 52.516666666667, 13.383333333333)],
        "P856": [("url", "https://www.berlin.de/")],
        "P1082": [("quantity", "+3520031"), ("quantity", "+3562166")],
        "P1376": [("item", "Q183")],
        "P1448": [("mono", "Berlin", "de")],
        "P1889": [("somevalue", "wikibase-item")],
        "P2044": [("quantity", "+34", METRE)],
    }
    entity("en", "Berlin", "Q64", claims)
    entity("de", "Berlin", "Q64", claims)

    members("en", "Category:Berlin", [
        "Berlin", "Outline of Berlin", "Berliner Luft", "Berlin Declaration (1945)", "Berlin (song)",
    ], 0)
    members("en", "Category:Berlin", [
        "Category:Berlin-related lists", "Category:Boroughs of Berlin", "Category:Buildings and structures in Berlin",
        "Category:Culture in Berlin", "Category:Economy of Berlin", "Category:Education in Berlin",
        "Category:Geography of Berlin", "Category:Government of Berlin", "Category:History of Berlin",
        "Category:People from Berlin", "Category:Sport in Berlin", "Category:Transport in Berlin",
        "Category:Visitor attractions in Berlin",
    ], 14)


# --- Miniatur Wunderland ---------------------------------------------------

MW_LANGS = [
    ("de", "Miniatur Wunderland"), ("es", "Miniatur Wunderland"), ("fr", "Miniatur Wunderland"),
    ("it", "Miniatur Wunderland"), ("ja", "ミニチュア・ワンダーランド"), ("nl", "Miniatur Wunderland"),
    ("pl", "Miniatur Wunderland"), ("ru", "Миниатюрная страна чудес"), ("sv", "Miniatur Wunderland"),
    ("zh", "微縮景觀世界"),
]
MW_REDIRECTS = {
    "en": ["Miniature Wonderland", "Miniatur-Wunderland", "Miniaturwunderland", "Miniature Wunderland"],
    "de": ["Miniaturwunderland", "Miniatur-Wunderland", "Knuffingen", "Wunderland Hamburg"],
    "es": ["Miniature Wonderland"],
    "fr": ["Miniatur-Wunderland"],
    "it": [],
    "ja": ["ミニチュアワンダーランド"],
    "nl": [],
    "pl": [],
    "ru": ["Miniatur Wunderland"],
    "sv": [],
    "zh": ["微缩景观世界"],
}
# Baseline daily human views before the campaign and the multiplier after.
MW_TRAFFIC = {
    "en": (610, 3.4), "de": (1450, 1.5), "es": (95, 2.6), "fr": (120, 2.2), "it": (70, 2.9),
    "ja": (55, 2.1), "nl": (40, 1.8), "pl": (18, 2.4), "ru": (85, 2.7), "zh": (25, 2.0),
}


def wunderland():
    langlinks("en", "Miniatur Wunderland", MW_LANGS)
    backlinks("en", "Miniatur Wunderland", MW_REDIRECTS["en"], redirects=True)
    for lang, title in MW_LANGS:
        backlinks(lang, title, MW_REDIRECTS[lang], redirects=True)
    for lang, title in [("en", "Miniatur Wunderland")] + MW_LANGS:
        if lang not in MW_TRAFFIC:
            # No per-article data for this wiki in the window.
            pageviews_missing(lang, title, JAN_1, JAN_31)
            continue
        base, lift = MW_TRAFFIC[lang]
        series = []
        for d in days(JAN_1, JAN_31):
            if d.day < 13:
                level = base
                if lang == "de" and d.day == 8:
                    level = base * 1.9  # a television feature
            else:
                # Peak on the 13th decaying towards a raised plateau.
                decay = 0.85 ** (d.day - 13)
                level = base * (1 + (lift - 1) * (0.55 + 0.9 * decay))
            series.append(level)
        counts = noisy(series, len(series))
        if lang == "pl":
            counts[4] = 0  # omitted upstream, zero-filled by the client
        pageviews(lang, title, JAN_1, JAN_31, counts)


# --- Montreal visitor attractions ------------------------------------------

# title, mean daily views, item id, image (None when missing)
MONTREAL = [
    ("Bell Centre", 540, "Q649338", "Centre Bell 2013.jpg"),
    ("Biodôme de Montréal", 310, "Q1149917", "Biodome de Montreal.jpg"),
    ("Biosphère (Montreal)", 205, "Q1329425", "Biosphere Montreal.jpg"),
    ("Casino de Montréal", 260, "Q1047030", "Casino de Montreal 2.jpg"),
    ("Chinatown, Montreal", 230, "Q2367389", "Chinatown Montreal gate.jpg"),
    ("Jean-Talon Market", 205, "Q3190440", "Marche Jean-Talon.jpg"),
    ("La Ronde (amusement park)", 480, "Q1800478", "La Ronde Montreal.jpg"),
    ("Montreal Botanical Garden", 390, "Q1187565", "Jardin botanique de Montreal.jpg"),
    ("Montreal Insectarium", 85, "Q3152446", "Insectarium de Montreal.jpg"),
    ("Mount Royal", 1180, "Q1247395", "Mont Royal 2006.jpg"),
    ("Notre-Dame Basilica (Montreal)", 890, "Q1140167", "Basilique Notre-Dame Montreal.jpg"),
    ("Old Montreal", 1020, "Q1337577", "Vieux-Montreal.jpg"),
    ("Olympic Stadium (Montreal)", 1240, "Q1142463", None),
    ("Saint Joseph's Oratory", 760, "Q1433318", "Oratoire Saint-Joseph.jpg"),
    ("Underground City, Montreal", 760, "Q1392452", "Montreal underground city.jpg"),
]


def montreal():
    cat = "Category:Visitor attractions in Montreal"
    members("en", cat, [m[0] for m in MONTREAL], 0)
    totals = {}
    for title, base, _, _ in MONTREAL:
        counts = noisy(base, 31, 0.25)
        if title == "Underground City, Montreal":
            # Same series as the Oratory: the panel breaks the tie by title.
            counts = list(totals["Saint Joseph's Oratory"])
        totals[title] = counts
        pageviews("en", title, JAN_1, JAN_31, counts)
    label("P31", "instance of")
    label("P131", "located in the administrative territorial entity")
    label("Q16", "Canada")
    label("Q340", "Montreal")
    label("Q570116", "tourist attraction")
    for title, _, qid, image in MONTREAL:
        claims = {
            "P17": [("item", "Q16")],
            "P31": [("item", "Q570116"), ("item", "Q33506")],
            "P131": [("item", "Q340")],
        }
        if image:
            claims["P18"] = [("image", image)]
        entity("en", title, qid, claims)


# --- Skyscrapers -----------------------------------------------------------

# title, item, heights (metres, one per claim), country, synonyms
SKYSCRAPERS = [
    ("Burj Khalifa", "Q12495", ["+828"], "Q878", ["Burj Dubai", "Khalifa Tower", "Burj khalifa"]),
    ("Shanghai Tower", "Q14210", ["+632"], "Q148", ["Shanghai Center"]),
    ("Abraj Al-Bait", "Q210778", ["+601"], "Q851", ["Makkah Royal Clock Tower", "Abraj Al Bait Towers"]),
    ("Ping An Finance Centre", "Q1143541", ["+599.1"], "Q148", ["Ping An International Finance Centre"]),
    ("Lotte World Tower", "Q496252", ["+554.5"], "Q884", ["Lotte Super Tower"]),
    ("One World Trade Center", "Q11235", ["+541.3"], "Q30", ["Freedom Tower", "1 World Trade Center"]),
    ("Guangzhou CTF Finance Centre", "Q1540530", ["+530"], "Q148", []),
    ("Taipei 101", "Q83063", ["+508"], "Q865", ["Taipei World Financial Center"]),
    ("Shanghai World Financial Center", "Q217362", ["+492"], "Q148", ["SWFC", "Bottle opener (building)"]),
    ("International Commerce Centre", "Q260042", ["+484"], "Q8646", ["ICC Tower"]),
    ("Petronas Towers", "Q189476", [], "Q833", ["Petronas Twin Towers", "KLCC Twin Towers"]),
    ("Willis Tower", "Q11294", ["+442.1"], "Q30", ["Sears Tower"]),
    ("Empire State Building", "Q9188", ["+381", "+443.2"], "Q30", ["ESB", "Empire State building"]),
]


def skyscrapers():
    members("en", "Category:Skyscrapers over 350 meters", [s[0] for s in SKYSCRAPERS], 0)
    label("P2048", "height")
    label("Q878", "United Arab Emirates")
    label("Q148", "People's Republic of China")
    label("Q851", "Saudi Arabia")
    label("Q884", "South Korea")
    label("Q30", "United States of America")
    label("Q865", "Taiwan")
    label("Q8646", "Hong Kong")
    label("Q833", "Malaysia")
    for title, qid, heights, country, synonyms in SKYSCRAPERS:
        claims = {"P17": [("item", country)], "P18": [("image", f"{title}.jpg")]}
        if heights:
            claims["P2048"] = [("quantity", h, METRE) for h in heights]
        entity("en", title, qid, claims)
        backlinks("en", title, synonyms, redirects=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    root = pathlib.Path(__file__).resolve().parent.parent
    parser.add_argument("--out", type=pathlib.Path, default=root / "crates" / "wikitools" / "fixtures")
    args = parser.parse_args()
    berlin()
    wunderland()
    montreal()
    skyscrapers()
    A.write(args.out)
    print(f"{len(A.envelopes)} fixtures in {args.out}")


if __name__ == "__main__":
    main()
