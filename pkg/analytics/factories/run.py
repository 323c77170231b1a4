import factory

from analytics.models import AnalysisRun, StageRecord

from .faker import fake

STAGE_TOOLS = ('pagerank', 'enumerate_cycles', 'aggregate_flows', 'connected_components')


class AnalysisRunFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = AnalysisRun

    run_id = factory.Sequence(lambda n: 'run-%04d' % (n + 1))
    query = factory.LazyFunction(lambda: 'Is %s involved in money laundering?' % fake.name())
    coordinator = 'mock'
    seed = 777
    status = AnalysisRun.SUCCEEDED
    exit_code = 0
    run_dir = factory.LazyAttribute(lambda run: '/tmp/runs/%s' % run.run_id)


class StageRecordFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = StageRecord

    run = factory.SubFactory(AnalysisRunFactory)
    node_id = factory.Sequence(lambda n: 'stage_%d' % (n + 1))
    tool = factory.LazyFunction(lambda: fake.random.choice(STAGE_TOOLS))
    status = 'Ok'
    item_count = factory.LazyFunction(lambda: fake.random.randint(1, 500))
    omitted_count = 0
    elapsed = factory.LazyFunction(lambda: round(fake.random.uniform(0.001, 2.0), 3))
