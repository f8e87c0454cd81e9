"""Fixed English stopword list used by the tokenizer.

Deliberately small and frozen: the tokenizer already drops tokens shorter
than three characters, so only words of length >= 3 need listing.
"""

STOPWORDS = frozenset(
    """
    about above after again against all and any are aren because been before
    being below between both but can cannot could couldn did didn does doesn
    doing don down during each few for from further had hadn has hasn have
    haven having her here hers herself him himself his how isn its itself
    just more most mustn myself nor not now off once only other our ours
    ourselves out over own same shan she should shouldn some such than that
    the their theirs them themselves then there these they this those through
    too under until very was wasn were weren what when where which while who
    whom why will with won would wouldn you your yours yourself yourselves
    """.split()
)
