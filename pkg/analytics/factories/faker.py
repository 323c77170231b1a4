from faker import Faker

fake = Faker('en_US')
fake.seed_instance(777)
