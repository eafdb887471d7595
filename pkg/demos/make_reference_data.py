"""Regenerate the bundled reference tables under src/lexgeo/data/.

All tables are hand-curated stand-ins shaped like the public inventories
they mirror (core-vocabulary gloss list, language inventory with families
and scripts, pairwise language distances, colexification counts, word
forms). The distance matrix is seeded synthetic data structured by family
membership, not measured distances; see data/README.md.

Run from anywhere: python3 demos/make_reference_data.py
"""

import csv
from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "lexgeo" / "data"

# gloss -> (category, polysemous)
SWADESH = [
    ("I", "Pronouns"), ("you", "Pronouns"), ("we", "Pronouns"),
    ("this", "Pronouns"), ("that", "Pronouns"), ("who", "Pronouns"),
    ("what", "Pronouns"),
    ("all", "Quantifiers"), ("many", "Quantifiers"), ("one", "Quantifiers"),
    ("two", "Quantifiers"), ("not", "Quantifiers"),
    ("big", "Adjectives"), ("long", "Adjectives"), ("small", "Adjectives"),
    ("new", "Adjectives"), ("good", "Adjectives"), ("round", "Adjectives"),
    ("dry", "Adjectives"), ("warm", "Adjectives"), ("cold", "Adjectives"),
    ("full", "Adjectives"),
    ("woman", "People"), ("man", "People"), ("person", "People"),
    ("fish", "Animals"), ("bird", "Animals"), ("dog", "Animals"),
    ("louse", "Animals"), ("egg", "Animals"),
    ("tree", "Plants"), ("seed", "Plants"), ("leaf", "Plants"),
    ("root", "Plants"), ("bark", "Plants"),
    ("skin", "Body"), ("flesh", "Body"), ("blood", "Body"), ("bone", "Body"),
    ("grease", "Body"), ("horn", "Body"), ("tail", "Body"),
    ("feather", "Body"), ("hair", "Body"), ("head", "Body"), ("ear", "Body"),
    ("eye", "Body"), ("nose", "Body"), ("mouth", "Body"), ("tooth", "Body"),
    ("tongue", "Body"), ("claw", "Body"), ("foot", "Body"), ("knee", "Body"),
    ("hand", "Body"), ("belly", "Body"), ("neck", "Body"), ("breast", "Body"),
    ("heart", "Body"), ("liver", "Body"),
    ("drink", "Verbs"), ("eat", "Verbs"), ("bite", "Verbs"), ("see", "Verbs"),
    ("hear", "Verbs"), ("know", "Verbs"), ("sleep", "Verbs"), ("die", "Verbs"),
    ("kill", "Verbs"), ("swim", "Verbs"), ("fly", "Verbs"), ("walk", "Verbs"),
    ("come", "Verbs"), ("lie", "Verbs"), ("sit", "Verbs"), ("stand", "Verbs"),
    ("give", "Verbs"), ("say", "Verbs"), ("burn", "Verbs"),
    ("sun", "Nature"), ("moon", "Nature"), ("star", "Nature"),
    ("water", "Nature"), ("rain", "Nature"), ("stone", "Nature"),
    ("sand", "Nature"), ("earth", "Nature"), ("cloud", "Nature"),
    ("smoke", "Nature"), ("fire", "Nature"), ("ash", "Nature"),
    ("path", "Nature"), ("mountain", "Nature"), ("night", "Nature"),
    ("day", "Nature"),
    ("red", "Colors"), ("green", "Colors"), ("yellow", "Colors"),
    ("white", "Colors"), ("black", "Colors"),
    ("name", "Other"),
]
POLYSEMOUS = {"bark", "lie", "fly"}

# code -> (family, subfamily or None); script comes from the code suffix
LANGUAGES = {
    # Indo-European / Romance
    "spa_Latn": ("Indo-European", "Romance"), "por_Latn": ("Indo-European", "Romance"),
    "fra_Latn": ("Indo-European", "Romance"), "ita_Latn": ("Indo-European", "Romance"),
    "ron_Latn": ("Indo-European", "Romance"), "cat_Latn": ("Indo-European", "Romance"),
    "glg_Latn": ("Indo-European", "Romance"), "oci_Latn": ("Indo-European", "Romance"),
    "ast_Latn": ("Indo-European", "Romance"), "lmo_Latn": ("Indo-European", "Romance"),
    "vec_Latn": ("Indo-European", "Romance"), "scn_Latn": ("Indo-European", "Romance"),
    "srd_Latn": ("Indo-European", "Romance"), "fur_Latn": ("Indo-European", "Romance"),
    "lij_Latn": ("Indo-European", "Romance"),
    # Indo-European / Germanic
    "eng_Latn": ("Indo-European", "Germanic"), "deu_Latn": ("Indo-European", "Germanic"),
    "nld_Latn": ("Indo-European", "Germanic"), "swe_Latn": ("Indo-European", "Germanic"),
    "dan_Latn": ("Indo-European", "Germanic"), "nob_Latn": ("Indo-European", "Germanic"),
    "nno_Latn": ("Indo-European", "Germanic"), "isl_Latn": ("Indo-European", "Germanic"),
    "afr_Latn": ("Indo-European", "Germanic"), "ltz_Latn": ("Indo-European", "Germanic"),
    "lim_Latn": ("Indo-European", "Germanic"), "fao_Latn": ("Indo-European", "Germanic"),
    # Indo-European / Slavic
    "rus_Cyrl": ("Indo-European", "Slavic"), "ukr_Cyrl": ("Indo-European", "Slavic"),
    "bel_Cyrl": ("Indo-European", "Slavic"), "pol_Latn": ("Indo-European", "Slavic"),
    "ces_Latn": ("Indo-European", "Slavic"), "slk_Latn": ("Indo-European", "Slavic"),
    "slv_Latn": ("Indo-European", "Slavic"), "hrv_Latn": ("Indo-European", "Slavic"),
    "srp_Cyrl": ("Indo-European", "Slavic"), "bos_Latn": ("Indo-European", "Slavic"),
    "mkd_Cyrl": ("Indo-European", "Slavic"), "bul_Cyrl": ("Indo-European", "Slavic"),
    # Indo-European / Indo-Aryan
    "hin_Deva": ("Indo-European", "Indo-Aryan"), "ben_Beng": ("Indo-European", "Indo-Aryan"),
    "urd_Arab": ("Indo-European", "Indo-Aryan"), "pan_Guru": ("Indo-European", "Indo-Aryan"),
    "guj_Gujr": ("Indo-European", "Indo-Aryan"), "mar_Deva": ("Indo-European", "Indo-Aryan"),
    "nep_Deva": ("Indo-European", "Indo-Aryan"), "sin_Sinh": ("Indo-European", "Indo-Aryan"),
    "asm_Beng": ("Indo-European", "Indo-Aryan"), "ory_Orya": ("Indo-European", "Indo-Aryan"),
    # Indo-European / Iranian
    "pes_Arab": ("Indo-European", "Iranian"), "tgk_Cyrl": ("Indo-European", "Iranian"),
    "pbt_Arab": ("Indo-European", "Iranian"), "ckb_Arab": ("Indo-European", "Iranian"),
    "kmr_Latn": ("Indo-European", "Iranian"),
    # Indo-European / other branches
    "ell_Grek": ("Indo-European", "Hellenic"), "hye_Armn": ("Indo-European", "Armenian"),
    "lit_Latn": ("Indo-European", "Baltic"), "lav_Latn": ("Indo-European", "Baltic"),
    "gle_Latn": ("Indo-European", "Celtic"), "cym_Latn": ("Indo-European", "Celtic"),
    "als_Latn": ("Indo-European", "Albanian"),
    # Uralic
    "fin_Latn": ("Uralic", "Finnic"), "est_Latn": ("Uralic", "Finnic"),
    "hun_Latn": ("Uralic", "Ugric"),
    # Turkic
    "tur_Latn": ("Turkic", "Oghuz"), "azj_Latn": ("Turkic", "Oghuz"),
    "tuk_Latn": ("Turkic", "Oghuz"), "kaz_Cyrl": ("Turkic", "Kipchak"),
    "kir_Cyrl": ("Turkic", "Kipchak"), "tat_Cyrl": ("Turkic", "Kipchak"),
    "bak_Cyrl": ("Turkic", "Kipchak"), "crh_Latn": ("Turkic", "Kipchak"),
    "uzn_Latn": ("Turkic", "Karluk"), "uig_Arab": ("Turkic", "Karluk"),
    # isolates-in-inventory and small families
    "khk_Cyrl": ("Mongolic", None), "kor_Hang": ("Koreanic", None),
    "jpn_Jpan": ("Japonic", None), "kat_Geor": ("Kartvelian", None),
    "luo_Latn": ("Nilo-Saharan", None),
    # Sino-Tibetan
    "zho_Hans": ("Sino-Tibetan", "Sinitic"), "yue_Hant": ("Sino-Tibetan", "Sinitic"),
    "bod_Tibt": ("Sino-Tibetan", "Tibeto-Burman"), "mya_Mymr": ("Sino-Tibetan", "Tibeto-Burman"),
    "kac_Latn": ("Sino-Tibetan", "Tibeto-Burman"),
    # Tai-Kadai
    "tha_Thai": ("Tai-Kadai", "Tai"), "lao_Laoo": ("Tai-Kadai", "Tai"),
    "shn_Mymr": ("Tai-Kadai", "Tai"),
    # Austroasiatic
    "vie_Latn": ("Austroasiatic", "Vietic"), "khm_Khmr": ("Austroasiatic", "Khmeric"),
    # Austronesian
    "ind_Latn": ("Austronesian", "Malayic"), "zsm_Latn": ("Austronesian", "Malayic"),
    "min_Latn": ("Austronesian", "Malayic"), "jav_Latn": ("Austronesian", "Javanesic"),
    "sun_Latn": ("Austronesian", "Sundanese"), "ceb_Latn": ("Austronesian", "Philippine"),
    "tgl_Latn": ("Austronesian", "Philippine"), "ilo_Latn": ("Austronesian", "Philippine"),
    "war_Latn": ("Austronesian", "Philippine"), "plt_Latn": ("Austronesian", "Barito"),
    "smo_Latn": ("Austronesian", "Oceanic"), "mri_Latn": ("Austronesian", "Oceanic"),
    "fij_Latn": ("Austronesian", "Oceanic"),
    # Dravidian
    "tam_Taml": ("Dravidian", "South Dravidian"), "kan_Knda": ("Dravidian", "South Dravidian"),
    "mal_Mlym": ("Dravidian", "South Dravidian"), "tel_Telu": ("Dravidian", "South-Central Dravidian"),
    # Afro-Asiatic
    "arb_Arab": ("Afro-Asiatic", "Semitic"), "heb_Hebr": ("Afro-Asiatic", "Semitic"),
    "amh_Ethi": ("Afro-Asiatic", "Semitic"), "tir_Ethi": ("Afro-Asiatic", "Semitic"),
    "mlt_Latn": ("Afro-Asiatic", "Semitic"), "hau_Latn": ("Afro-Asiatic", "Chadic"),
    "som_Latn": ("Afro-Asiatic", "Cushitic"), "kab_Latn": ("Afro-Asiatic", "Berber"),
    "taq_Latn": ("Afro-Asiatic", "Berber"),
    # Niger-Congo
    "swh_Latn": ("Niger-Congo", "Bantu"), "zul_Latn": ("Niger-Congo", "Bantu"),
    "xho_Latn": ("Niger-Congo", "Bantu"), "sna_Latn": ("Niger-Congo", "Bantu"),
    "nya_Latn": ("Niger-Congo", "Bantu"), "lin_Latn": ("Niger-Congo", "Bantu"),
    "lug_Latn": ("Niger-Congo", "Bantu"), "kin_Latn": ("Niger-Congo", "Bantu"),
    "run_Latn": ("Niger-Congo", "Bantu"), "sot_Latn": ("Niger-Congo", "Bantu"),
    "tsn_Latn": ("Niger-Congo", "Bantu"), "tso_Latn": ("Niger-Congo", "Bantu"),
    "kik_Latn": ("Niger-Congo", "Bantu"),
    "yor_Latn": ("Niger-Congo", "Volta-Niger"), "ibo_Latn": ("Niger-Congo", "Volta-Niger"),
    "ewe_Latn": ("Niger-Congo", "Volta-Niger"), "twi_Latn": ("Niger-Congo", "Volta-Niger"),
    "wol_Latn": ("Niger-Congo", "Atlantic"), "fuv_Latn": ("Niger-Congo", "Atlantic"),
    "bam_Latn": ("Niger-Congo", "Mande"),
}

# 88-language subset with pairwise distances in the bundled matrix
MATRIX_SUBSET = [
    # Indo-European (40)
    "spa_Latn", "por_Latn", "fra_Latn", "ita_Latn", "ron_Latn", "cat_Latn",
    "glg_Latn",
    "eng_Latn", "deu_Latn", "nld_Latn", "swe_Latn", "dan_Latn", "nob_Latn",
    "isl_Latn", "afr_Latn",
    "rus_Cyrl", "ukr_Cyrl", "pol_Latn", "ces_Latn", "slk_Latn", "slv_Latn",
    "hrv_Latn", "srp_Cyrl", "mkd_Cyrl", "bul_Cyrl",
    "hin_Deva", "ben_Beng", "urd_Arab", "pan_Guru", "guj_Gujr", "mar_Deva",
    "nep_Deva",
    "pes_Arab", "tgk_Cyrl",
    "ell_Grek", "hye_Armn", "lit_Latn", "lav_Latn", "gle_Latn", "cym_Latn",
    # Uralic (3)
    "fin_Latn", "est_Latn", "hun_Latn",
    # Turkic (6)
    "tur_Latn", "azj_Latn", "tuk_Latn", "kaz_Cyrl", "kir_Cyrl", "uzn_Latn",
    # small families (3)
    "khk_Cyrl", "kor_Hang", "jpn_Jpan",
    # Sino-Tibetan (4)
    "zho_Hans", "yue_Hant", "bod_Tibt", "mya_Mymr",
    # Tai-Kadai (2)
    "tha_Thai", "lao_Laoo",
    # Austroasiatic (2)
    "vie_Latn", "khm_Khmr",
    # Austronesian (8)
    "ind_Latn", "zsm_Latn", "jav_Latn", "sun_Latn", "ceb_Latn", "tgl_Latn",
    "plt_Latn", "mri_Latn",
    # Dravidian (4)
    "tam_Taml", "tel_Telu", "kan_Knda", "mal_Mlym",
    # Afro-Asiatic (6)
    "arb_Arab", "heb_Hebr", "amh_Ethi", "mlt_Latn", "hau_Latn", "som_Latn",
    # Niger-Congo (8)
    "swh_Latn", "yor_Latn", "ibo_Latn", "zul_Latn", "sna_Latn", "nya_Latn",
    "lug_Latn", "kin_Latn",
    # Nilo-Saharan, Kartvelian (2)
    "luo_Latn", "kat_Geor",
]

# gloss -> forms in eng/spa/fra/deu
WORD_FORMS = {
    "I": ("I", "yo", "je", "ich"),
    "you": ("you", "tu", "tu", "du"),
    "we": ("we", "nosotros", "nous", "wir"),
    "this": ("this", "este", "ceci", "dies"),
    "that": ("that", "ese", "cela", "das"),
    "who": ("who", "quien", "qui", "wer"),
    "what": ("what", "que", "quoi", "was"),
    "all": ("all", "todo", "tout", "alle"),
    "many": ("many", "muchos", "beaucoup", "viele"),
    "one": ("one", "uno", "un", "eins"),
    "two": ("two", "dos", "deux", "zwei"),
    "not": ("not", "no", "pas", "nicht"),
    "big": ("big", "grande", "grand", "gross"),
    "long": ("long", "largo", "long", "lang"),
    "small": ("small", "pequeno", "petit", "klein"),
    "new": ("new", "nuevo", "nouveau", "neu"),
    "good": ("good", "bueno", "bon", "gut"),
    "round": ("round", "redondo", "rond", "rund"),
    "dry": ("dry", "seco", "sec", "trocken"),
    "warm": ("warm", "caliente", "chaud", "warm"),
    "cold": ("cold", "frio", "froid", "kalt"),
    "full": ("full", "lleno", "plein", "voll"),
    "woman": ("woman", "mujer", "femme", "Frau"),
    "man": ("man", "hombre", "homme", "Mann"),
    "person": ("person", "persona", "personne", "Mensch"),
    "fish": ("fish", "pez", "poisson", "Fisch"),
    "bird": ("bird", "pajaro", "oiseau", "Vogel"),
    "dog": ("dog", "perro", "chien", "Hund"),
    "louse": ("louse", "piojo", "pou", "Laus"),
    "egg": ("egg", "huevo", "oeuf", "Ei"),
    "tree": ("tree", "arbol", "arbre", "Baum"),
    "seed": ("seed", "semilla", "graine", "Same"),
    "leaf": ("leaf", "hoja", "feuille", "Blatt"),
    "root": ("root", "raiz", "racine", "Wurzel"),
    "bark": ("bark", "corteza", "ecorce", "Rinde"),
    "skin": ("skin", "piel", "peau", "Haut"),
    "flesh": ("flesh", "carne", "chair", "Fleisch"),
    "blood": ("blood", "sangre", "sang", "Blut"),
    "bone": ("bone", "hueso", "os", "Knochen"),
    "grease": ("grease", "grasa", "graisse", "Fett"),
    "horn": ("horn", "cuerno", "corne", "Horn"),
    "tail": ("tail", "cola", "queue", "Schwanz"),
    "feather": ("feather", "pluma", "plume", "Feder"),
    "hair": ("hair", "pelo", "cheveu", "Haar"),
    "head": ("head", "cabeza", "tete", "Kopf"),
    "ear": ("ear", "oreja", "oreille", "Ohr"),
    "eye": ("eye", "ojo", "oeil", "Auge"),
    "nose": ("nose", "nariz", "nez", "Nase"),
    "mouth": ("mouth", "boca", "bouche", "Mund"),
    "tooth": ("tooth", "diente", "dent", "Zahn"),
    "tongue": ("tongue", "lengua", "langue", "Zunge"),
    "claw": ("claw", "garra", "griffe", "Kralle"),
    "foot": ("foot", "pie", "pied", "Fuss"),
    "knee": ("knee", "rodilla", "genou", "Knie"),
    "hand": ("hand", "mano", "main", "Hand"),
    "belly": ("belly", "vientre", "ventre", "Bauch"),
    "neck": ("neck", "cuello", "cou", "Hals"),
    "breast": ("breast", "pecho", "sein", "Brust"),
    "heart": ("heart", "corazon", "coeur", "Herz"),
    "liver": ("liver", "higado", "foie", "Leber"),
    "drink": ("drink", "beber", "boire", "trinken"),
    "eat": ("eat", "comer", "manger", "essen"),
    "bite": ("bite", "morder", "mordre", "beissen"),
    "see": ("see", "ver", "voir", "sehen"),
    "hear": ("hear", "oir", "entendre", "horen"),
    "know": ("know", "saber", "savoir", "wissen"),
    "sleep": ("sleep", "dormir", "dormir", "schlafen"),
    "die": ("die", "morir", "mourir", "sterben"),
    "kill": ("kill", "matar", "tuer", "toten"),
    "swim": ("swim", "nadar", "nager", "schwimmen"),
    "fly": ("fly", "volar", "voler", "fliegen"),
    "walk": ("walk", "caminar", "marcher", "gehen"),
    "come": ("come", "venir", "venir", "kommen"),
    "lie": ("lie", "yacer", "coucher", "liegen"),
    "sit": ("sit", "sentarse", "asseoir", "sitzen"),
    "stand": ("stand", "pararse", "debout", "stehen"),
    "give": ("give", "dar", "donner", "geben"),
    "say": ("say", "decir", "dire", "sagen"),
    "burn": ("burn", "quemar", "bruler", "brennen"),
    "sun": ("sun", "sol", "soleil", "Sonne"),
    "moon": ("moon", "luna", "lune", "Mond"),
    "star": ("star", "estrella", "etoile", "Stern"),
    "water": ("water", "agua", "eau", "Wasser"),
    "rain": ("rain", "lluvia", "pluie", "Regen"),
    "stone": ("stone", "piedra", "pierre", "Stein"),
    "sand": ("sand", "arena", "sable", "Sand"),
    "earth": ("earth", "tierra", "terre", "Erde"),
    "cloud": ("cloud", "nube", "nuage", "Wolke"),
    "smoke": ("smoke", "humo", "fumee", "Rauch"),
    "fire": ("fire", "fuego", "feu", "Feuer"),
    "ash": ("ash", "ceniza", "cendre", "Asche"),
    "path": ("path", "camino", "chemin", "Weg"),
    "mountain": ("mountain", "montana", "montagne", "Berg"),
    "night": ("night", "noche", "nuit", "Nacht"),
    "day": ("day", "dia", "jour", "Tag"),
    "red": ("red", "rojo", "rouge", "rot"),
    "green": ("green", "verde", "vert", "grun"),
    "yellow": ("yellow", "amarillo", "jaune", "gelb"),
    "white": ("white", "blanco", "blanc", "weiss"),
    "black": ("black", "negro", "noir", "schwarz"),
    "name": ("name", "nombre", "nom", "Name"),
}
FORM_LANGS = ("eng_Latn", "spa_Latn", "fra_Latn", "deu_Latn")

# (concept_a, concept_b, cross-family count); partners outside the gloss
# list (arm, month, ...) exercise the store join
COLEX_EDGES = [
    ("sun", "day", 17), ("sun", "fire", 8), ("moon", "night", 6),
    ("star", "eye", 2), ("water", "rain", 9), ("stone", "mountain", 5),
    ("sand", "earth", 12), ("cloud", "smoke", 7), ("smoke", "fire", 4),
    ("fire", "ash", 3), ("path", "foot", 2), ("night", "day", 1),
    ("skin", "bark", 21), ("flesh", "skin", 5), ("blood", "flesh", 2),
    ("bone", "horn", 3), ("horn", "claw", 4), ("tail", "feather", 2),
    ("feather", "hair", 13), ("hair", "head", 2), ("ear", "hear", 10),
    ("eye", "see", 8), ("nose", "mouth", 2), ("mouth", "tooth", 3),
    ("tooth", "bite", 6), ("tongue", "mouth", 4), ("claw", "foot", 5),
    ("knee", "foot", 2), ("hand", "foot", 3), ("belly", "liver", 2),
    ("breast", "heart", 2), ("heart", "liver", 5), ("tree", "bark", 7),
    ("tree", "leaf", 3), ("root", "tree", 4), ("man", "person", 23),
    ("woman", "person", 11), ("eat", "bite", 7), ("see", "hear", 2),
    ("die", "kill", 4),
    # partners not in the gloss list
    ("hand", "arm", 45), ("moon", "month", 28), ("tongue", "language", 31),
    ("tree", "wood", 26), ("flesh", "meat", 19), ("hear", "listen", 14),
    ("skin", "leather", 11), ("earth", "soil", 22), ("neck", "throat", 18),
    ("seed", "fruit", 16),
]

OFFSET_PAIRS = [
    ("fire", "water"), ("sun", "moon"), ("man", "woman"), ("big", "small"),
    ("warm", "cold"), ("black", "white"), ("night", "day"), ("eat", "drink"),
    ("see", "hear"), ("sit", "stand"), ("sleep", "die"), ("die", "kill"),
    ("hand", "foot"), ("eye", "ear"), ("mouth", "nose"), ("tongue", "tooth"),
    ("sun", "star"), ("water", "rain"), ("stone", "sand"), ("fish", "bird"),
    ("tree", "leaf"), ("red", "green"),
]

README = """# Bundled reference tables

Hand-curated stand-ins shaped like the public inventories they mirror.
Numbers are NOT measured data: the distance matrix is seeded synthetic
structure (same subfamily ~0.45, same family ~0.75, cross family ~0.92,
plus seeded jitter) and the colexification counts are invented but
plausible. They exist so demos and CLI runs have well-formed inputs at the
documented shapes (101 glosses, 135 languages, an 88-language distance
subset, a 54-concept colexification universe). Regenerate everything with
demos/make_reference_data.py.

Files:
- swadesh_101.csv      gloss,category,polysemous
- languages_135.csv    code,family,script
- asjp_88.csv          square matrix; header row = language codes
- colex_edges.csv      concept_a,concept_b,family_count
- wordforms.csv        gloss,language_code,form (eng/spa/fra/deu)
- subfamilies.csv      language_code,subfamily
- offset_pairs.csv     concept_a,concept_b
"""


def write_all() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    glosses = [g for g, _ in SWADESH]
    assert len(glosses) == 101 and len(set(glosses)) == 101
    with open(DATA_DIR / "swadesh_101.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gloss", "category", "polysemous"])
        for gloss, cat in SWADESH:
            w.writerow([gloss, cat, "true" if gloss in POLYSEMOUS else "false"])

    codes = list(LANGUAGES)
    assert len(codes) == 135 and len(set(codes)) == 135
    with open(DATA_DIR / "languages_135.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", "family", "script"])
        for code in codes:
            family, _ = LANGUAGES[code]
            w.writerow([code, family, code.split("_")[1]])

    with open(DATA_DIR / "subfamilies.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["language_code", "subfamily"])
        for code in codes:
            _, sub = LANGUAGES[code]
            if sub is not None:
                w.writerow([code, sub])

    subset = MATRIX_SUBSET
    assert len(subset) == 88 and len(set(subset)) == 88
    assert all(c in LANGUAGES for c in subset)
    rng = np.random.Generator(np.random.Philox(key=20260814))
    n = len(subset)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            fam_i, sub_i = LANGUAGES[subset[i]]
            fam_j, sub_j = LANGUAGES[subset[j]]
            if fam_i != fam_j:
                base, spread = 0.92, 0.05
            elif sub_i is not None and sub_i == sub_j:
                base, spread = 0.45, 0.10
            else:
                base, spread = 0.75, 0.10
            d = np.clip(base + spread * rng.standard_normal(), 0.02, 0.999)
            dist[i, j] = dist[j, i] = d
    with open(DATA_DIR / "asjp_88.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(subset)
        for i in range(n):
            w.writerow([f"{v:.6f}" for v in dist[i]])

    in_list = {g for g in glosses}
    universe = sorted({c for a, b, _ in COLEX_EDGES for c in (a, b) if c in in_list})
    assert len(universe) == 54, f"expected 54 in-list colex concepts, got {len(universe)}"
    assert "drink" not in universe
    seen = set()
    with open(DATA_DIR / "colex_edges.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["concept_a", "concept_b", "family_count"])
        for a, b, count in COLEX_EDGES:
            key = frozenset((a, b))
            assert key not in seen
            seen.add(key)
            w.writerow([a, b, count])

    with open(DATA_DIR / "wordforms.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gloss", "language_code", "form"])
        for gloss in glosses:
            forms = WORD_FORMS[gloss]
            assert len(forms) == len(FORM_LANGS)
            for code, form in zip(FORM_LANGS, forms):
                w.writerow([gloss, code, form])

    for a, b in OFFSET_PAIRS:
        assert a in in_list and b in in_list, (a, b)
    assert len(OFFSET_PAIRS) == 22
    with open(DATA_DIR / "offset_pairs.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["concept_a", "concept_b"])
        for a, b in OFFSET_PAIRS:
            w.writerow([a, b])

    (DATA_DIR / "README.md").write_text(README, encoding="utf-8")
    print(f"wrote 8 files under {DATA_DIR}")


if __name__ == "__main__":
    write_all()
