"""Hand-written bracketed-parse corpus used across the test suite.

Each entry pairs a text with one bracketed parse line per sentence,
aligned leaf-for-token with the package tokenizer.  BENCHMARK is the
nine-word pangram sentence used for the regression tests.
"""

BENCHMARK_TEXT = "The quick brown fox jumps over the lazy dog."
BENCHMARK_PARSE = ("(ROOT (S (NP (DT The) (JJ quick) (JJ brown) (NN fox)) "
                   "(VP (VBZ jumps) (PP (IN over) (NP (DT the) (JJ lazy) "
                   "(NN dog)))) (. .)))")

# (text, [parse line per sentence])
CORPUS: list[tuple[str, list[str]]] = [
    (BENCHMARK_TEXT, [BENCHMARK_PARSE]),
    ("Hi!", ["(ROOT (INTJ (UH Hi) (. !)))"]),
    ("Go.", ["(ROOT (S (VP (VB Go)) (. .)))"]),
    ("The fox runs.",
     ["(ROOT (S (NP (DT The) (NN fox)) (VP (VBZ runs)) (. .)))"]),
    ("She gave him a book yesterday.",
     ["(ROOT (S (NP (PRP She)) (VP (VBD gave) (NP (PRP him)) "
      "(NP (DT a) (NN book)) (NP (NN yesterday))) (. .)))"]),
    ("The cat sat on the mat, and the dog slept.",
     ["(ROOT (S (S (NP (DT The) (NN cat)) (VP (VBD sat) (PP (IN on) "
      "(NP (DT the) (NN mat))))) (, ,) (CC and) (S (NP (DT the) (NN dog)) "
      "(VP (VBD slept))) (. .)))"]),
    ('He said, "Stop now."',
     ['(ROOT (S (NP (PRP He)) (VP (VBD said) (, ,) (S (`` ") '
      '(VP (VB Stop) (ADVP (RB now))) (. .) (\'\' ")))))']),
    ("Birds fly. Fish swim.",
     ["(ROOT (S (NP (NNS Birds)) (VP (VBP fly)) (. .)))",
      "(ROOT (S (NP (NN Fish)) (VP (VBP swim)) (. .)))"]),
    ("I think that she knows that he left.",
     ["(ROOT (S (NP (PRP I)) (VP (VBP think) (SBAR (IN that) (S (NP (PRP she)) "
      "(VP (VBZ knows) (SBAR (IN that) (S (NP (PRP he)) (VP (VBD left)))))))) "
      "(. .)))"]),
    ("The man with the telescope saw her.",
     ["(ROOT (S (NP (NP (DT The) (NN man)) (PP (IN with) (NP (DT the) "
      "(NN telescope)))) (VP (VBD saw) (NP (PRP her))) (. .)))"]),
    ("Wow!", ["(ROOT (INTJ (UH Wow) (. !)))"]),
    ("Time flies like an arrow; fruit flies like a banana.",
     ["(ROOT (S (S (NP (NN Time)) (VP (VBZ flies) (PP (IN like) (NP (DT an) "
      "(NN arrow))))) (: ;) (S (NP (NN fruit) (NNS flies)) (VP (VBP like) "
      "(NP (DT a) (NN banana)))) (. .)))"]),
    ("A well-known artist arrived late.",
     ["(ROOT (S (NP (DT A) (JJ well-known) (NN artist)) (VP (VBD arrived) "
      "(ADVP (RB late))) (. .)))"]),
    ("Don't stop the music.",
     ["(ROOT (S (VP (VB Don't) (VP (VB stop) (NP (DT the) (NN music)))) (. .)))"]),
    ("She bought 3 apples for 5 dollars.",
     ["(ROOT (S (NP (PRP She)) (VP (VBD bought) (NP (CD 3) (NNS apples)) "
      "(PP (IN for) (NP (CD 5) (NNS dollars)))) (. .)))"]),
    ("The result (see below) is fine.",
     ["(ROOT (S (NP (DT The) (NN result)) (PRN (-LRB- -LRB-) (VP (VB see) "
      "(ADVP (RB below))) (-RRB- -RRB-)) (VP (VBZ is) (ADJP (JJ fine))) (. .)))"]),
    ("One. Two words. Three little words.",
     ["(ROOT (NP (CD One) (. .)))",
      "(ROOT (NP (CD Two) (NNS words) (. .)))",
      "(ROOT (NP (CD Three) (JJ little) (NNS words) (. .)))"]),
    ("Both the cat and the dog ran quickly home.",
     ["(ROOT (S (NP (CC Both) (NP (DT the) (NN cat)) (CC and) (NP (DT the) "
      "(NN dog))) (VP (VBD ran) (ADVP (RB quickly)) (NP (NN home))) (. .)))"]),
    ("After the rain stopped, we went outside.",
     ["(ROOT (S (SBAR (IN After) (S (NP (DT the) (NN rain)) (VP (VBD stopped)))) "
      "(, ,) (NP (PRP we)) (VP (VBD went) (ADVP (RB outside))) (. .)))"]),
    ("Is this the best answer?",
     ["(ROOT (SQ (VBZ Is) (NP (DT this)) (NP (DT the) (JJS best) (NN answer)) "
      "(. ?)))"]),
    ("The committee, which met yesterday, approved the plan.",
     ["(ROOT (S (NP (NP (DT The) (NN committee)) (, ,) (SBAR (WHNP (WDT which)) "
      "(S (VP (VBD met) (NP (NN yesterday))))) (, ,)) (VP (VBD approved) "
      "(NP (DT the) (NN plan))) (. .)))"]),
    ('"Stop!" she yelled.',
     ['(ROOT (FRAG (`` ") (VP (VB Stop)) (. !) (\'\' ")))',
      "(ROOT (S (NP (PRP she)) (VP (VBD yelled)) (. .)))"]),
    ('She said "go home."',
     ['(ROOT (S (NP (PRP She)) (VP (VBD said) (S (`` ") (VP (VB go) '
      '(NP (NN home))) (. .) (\'\' ")))))']),
]
